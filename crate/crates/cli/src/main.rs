use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sizeramsey::colour::{colour_host, Strategy};
use sizeramsey::coupling::{coupling_marginal_test, CouplingKind, CouplingSetup};
use sizeramsey::experiment::{report_csv, report_json, run_experiment, write_report, ExperimentConfig, PatternSource};
use sizeramsey::io::{self, DesignFile, GraphFile, Manifest};
use sizeramsey_core::decomposition::{decompose_cubic, validate_decomposition};
use sizeramsey_core::design::{affine_plane, steiner_triple, validate_design, BlockDesign};
use sizeramsey_core::embedding::{ramsey_embed, validate_embedding, RamseyConfig};
use sizeramsey_core::graph::Colour;
use sizeramsey_core::host::{assemble_host, assemble_host_audited, host_edge_budget_report, validate_parameters, LayeredHost};
use sizeramsey_core::params::ParameterSet;
use sizeramsey_core::random::random_regular;
use sizeramsey_core::Graph;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "sizeramsey", version, about = "Layered random hosts and monochromatic cubic embeddings")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON object of parameter overrides.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate block designs.
    Design {
        #[command(subcommand)]
        action: DesignAction,
    },
    /// Assemble or audit the layered host.
    Host {
        #[command(subcommand)]
        action: HostAction,
    },
    /// Split a cubic pattern into long induced cycles and a remainder.
    Decompose(PatternArgs),
    /// Colour a host and report colour counts.
    Colour(ColourArgs),
    /// Colour a host and embed a monochromatic copy of a pattern.
    Embed(EmbedArgs),
    /// Monte Carlo test of a subsampling or coupling law.
    CoupleTest(CoupleArgs),
    /// Run experiment campaigns.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
}

#[derive(Subcommand)]
enum DesignAction {
    Build(DesignArgs),
    Validate {
        /// Design JSON; builds from the flags when absent.
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        build: DesignArgs,
    },
}

#[derive(Args)]
struct DesignArgs {
    /// `sts` for Steiner triple systems, `affine` for affine planes.
    #[arg(long, default_value = "sts")]
    kind: String,
    /// Points of a triple system.
    #[arg(long, default_value_t = 7)]
    n: usize,
    /// Order of an affine plane.
    #[arg(long, default_value_t = 3)]
    q: usize,
}

#[derive(Args, Clone)]
struct HostArgs {
    #[arg(long, default_value_t = 501)]
    n: usize,
    #[arg(long = "block-size", default_value_t = 3)]
    c: usize,
}

#[derive(Subcommand)]
enum HostAction {
    Assemble {
        #[command(flatten)]
        host: HostArgs,
        /// Also write the host edge list.
        #[arg(long)]
        edges: bool,
    },
    Audit {
        #[command(flatten)]
        host: HostArgs,
        /// Samples drawn before giving up on a passing audit.
        #[arg(long, default_value_t = 1)]
        budget: usize,
    },
}

#[derive(Args, Clone)]
struct PatternArgs {
    /// Pattern graph JSON.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Vertices of a random cubic pattern, used when no file is given.
    #[arg(long, default_value_t = 30)]
    cubic: usize,
    #[arg(long, default_value_t = 5)]
    ell: usize,
}

#[derive(Args)]
struct ColourArgs {
    #[command(flatten)]
    host: HostArgs,
    #[arg(long, default_value = "all-red")]
    strategy: String,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    host: HostArgs,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value = "all-red")]
    strategy: String,
}

#[derive(Args)]
struct CoupleArgs {
    /// `block`, `biclique` or `layer-union`.
    #[arg(long, default_value = "block")]
    kind: String,
    #[arg(long = "block-size", default_value_t = 3)]
    c: usize,
    /// Block probability, or skeleton probability for the layer kinds.
    #[arg(long, default_value_t = 0.271)]
    p: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Design points for `layer-union`.
    #[arg(long)]
    n: Option<usize>,
    /// Layers for `layer-union`.
    #[arg(long, default_value_t = 3)]
    z: usize,
}

#[derive(Subcommand)]
enum ExperimentAction {
    Run {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long, default_value = "all-red")]
        strategy: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

struct Ctx {
    seed: u64,
    params: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn params(&self, h: &HostArgs) -> Result<ParameterSet> {
        io::load_params(self.params.as_deref(), h.n, h.c)
    }

    fn emit(&self, name: &str, json: String, csv: Option<String>) -> Result<()> {
        let (text, ext) = match (self.format, csv) {
            (Format::Csv, Some(csv)) => (csv, "csv"),
            _ => (json, "json"),
        };
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("{name}.{ext}"));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    fn manifest(&self, config: &serde_json::Value) -> Manifest {
        Manifest::new(self.seed, config)
    }
}

fn build_design(a: &DesignArgs) -> Result<BlockDesign> {
    Ok(match a.kind.as_str() {
        "sts" => steiner_triple(a.n)?,
        "affine" => affine_plane(a.q)?,
        k => bail!("unknown design kind `{k}`"),
    })
}

fn load_pattern(a: &PatternArgs, seed: u64) -> Result<Graph> {
    match &a.pattern {
        Some(p) => io::read_graph(p),
        None => random_regular(a.cubic, 3, seed).with_context(|| format!("no cubic graph on {} vertices", a.cubic)),
    }
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    Ok(s.parse::<Strategy>()?)
}

fn host_summary(h: &LayeredHost) -> serde_json::Value {
    let b = host_edge_budget_report(h);
    serde_json::json!({
        "n": h.n(),
        "block_size": h.design.block_size,
        "blocks": h.design.blocks.len(),
        "present_blocks": h.base.present.len(),
        "layers": h.z(),
        "leftover_blocks": h.partition.leftover.len(),
        "base_edges": b.base_edges,
        "expected_base_edges": b.expected_base_edges,
        "base_threshold": b.base_threshold,
        "base_within": b.base_within,
        "cube_layer_edges": b.cube_layer_edges,
        "host_edges": b.host_edges,
        "host_threshold": b.host_threshold,
        "host_within": b.host_within,
        "attempts": h.attempts,
        "params": io::params_json(&h.params),
    })
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx { seed: cli.seed, params: cli.params, out: cli.out, format: cli.format };
    match cli.command {
        Command::Design { action: DesignAction::Build(a) } => {
            let d = build_design(&a)?;
            let body = serde_json::to_value(DesignFile::from(&d))?;
            let config = serde_json::json!({"kind": a.kind, "n": a.n, "q": a.q});
            ctx.emit("design", io::json_with_manifest(&ctx.manifest(&config), body), None)
        }
        Command::Design { action: DesignAction::Validate { file, build } } => {
            let d = match &file {
                Some(f) => io::read_design(f)?,
                None => build_design(&build)?,
            };
            let r = validate_design(&d);
            let body = serde_json::json!({
                "n": d.n,
                "block_size": d.block_size,
                "blocks": d.blocks.len(),
                "valid": r.is_valid(),
                "pair_violations": r.pair_violations.len(),
                "block_violations": r.block_violations,
                "class_violations": r.class_violations,
            });
            let config = serde_json::json!({"file": file.map(|f| f.display().to_string()), "kind": build.kind, "n": build.n, "q": build.q});
            ctx.emit("design_report", io::json_with_manifest(&ctx.manifest(&config), body), None)
        }
        Command::Host { action: HostAction::Assemble { host, edges } } => {
            let p = ctx.params(&host)?;
            let h = assemble_host(&p, ctx.seed)?;
            let mut body = host_summary(&h);
            if edges {
                body["host"] = serde_json::to_value(GraphFile::from(&h.host))?;
            }
            ctx.emit("host", io::json_with_manifest(&ctx.manifest(&io::params_json(&p)), body), None)
        }
        Command::Host { action: HostAction::Audit { host, budget } } => {
            let p = ctx.params(&host)?;
            let (h, audit) = assemble_host_audited(&p, ctx.seed, budget)?;
            let checks = validate_parameters(&h.params, 2.0);
            let mut body = host_summary(&h);
            body["audit_passed"] = audit.passed.into();
            body["multiplicity_histogram"] = serde_json::to_value(&audit.multiplicity.histogram)?;
            body["max_multiplicity"] = audit.multiplicity.max_multiplicity.into();
            body["edges_in_five_or_more_layers"] = audit.multiplicity.at_least_five.into();
            body["edges_in_two_or_more_layers"] = audit.multiplicity.at_least_two.into();
            body["parameters_hard_ok"] = checks.hard_ok.into();
            body["parameter_chain_ok"] = checks.chain_ok().into();
            let links: Vec<serde_json::Value> = checks
                .links
                .iter()
                .map(|l| serde_json::json!({"left": l.left, "right": l.right, "left_value": l.left_value, "right_value": l.right_value, "passed": l.passed}))
                .collect();
            body["parameter_links"] = links.into();
            ctx.emit("audit", io::json_with_manifest(&ctx.manifest(&io::params_json(&p)), body), None)
        }
        Command::Decompose(a) => {
            let h = load_pattern(&a, ctx.seed)?;
            let d = decompose_cubic(&h, a.ell)?;
            let r = validate_decomposition(&h, &d, a.ell);
            let body = serde_json::json!({
                "n": h.n(),
                "ell": a.ell,
                "j": d.j,
                "cycles": d.cycles,
                "valid": r.is_valid(),
                "treewidth_bound": r.treewidth_bound,
                "partition_violations": r.partition_violations,
                "cycle_violations": r.cycle_violations,
                "back_degree_violations": r.back_degree_violations,
            });
            let config = serde_json::json!({"pattern": a.pattern.as_ref().map(|p| p.display().to_string()), "cubic": a.cubic, "ell": a.ell});
            let m = ctx.manifest(&config);
            let rows: Vec<Vec<String>> = (0..h.n())
                .map(|v| {
                    let part = d.j.contains(&v).then_some(0).or_else(|| d.cycles.iter().position(|c| c.contains(&v)).map(|i| i + 1));
                    vec![v.to_string(), part.map_or(String::new(), |p| p.to_string())]
                })
                .collect();
            ctx.emit("decomposition", io::json_with_manifest(&m, body), Some(io::csv_with_manifest(&m, &["vertex", "part"], &rows)))
        }
        Command::Colour(a) => {
            let strategy = parse_strategy(&a.strategy)?;
            let p = ctx.params(&a.host)?;
            let h = assemble_host(&p, ctx.seed)?;
            let c = colour_host(&h, &strategy, ctx.seed);
            let config = serde_json::json!({"params": io::params_json(&p), "strategy": strategy.to_string()});
            let m = ctx.manifest(&config);
            let body = serde_json::json!({
                "strategy": strategy.to_string(),
                "host_edges": h.host.m(),
                "red_edges": c.count(Colour::Red),
                "blue_edges": c.count(Colour::Blue),
            });
            let rows: Vec<Vec<String>> = h.host.edges().zip(c.colours()).map(|((u, v), col)| vec![u.to_string(), v.to_string(), col.name().to_string()]).collect();
            ctx.emit("colouring", io::json_with_manifest(&m, body), Some(io::csv_with_manifest(&m, &["u", "v", "colour"], &rows)))
        }
        Command::Embed(a) => {
            let strategy = parse_strategy(&a.strategy)?;
            let p = ctx.params(&a.host)?;
            let h = assemble_host(&p, ctx.seed)?;
            let pattern = load_pattern(&a.pattern, ctx.seed)?;
            let c = colour_host(&h, &strategy, ctx.seed);
            let cfg = RamseyConfig { seed: ctx.seed, ell: a.pattern.ell, ..RamseyConfig::default() };
            let r = ramsey_embed(&h, &c, &pattern, &cfg)?;
            let validated = match (&r.map, r.colour) {
                (Some(map), Some(col)) => validate_embedding(&pattern, &h.host, map, Some((&c, col)), None).is_valid(),
                _ => false,
            };
            let log: Vec<serde_json::Value> = r.log.iter().map(|s| serde_json::json!({"stage": s.stage, "ok": s.ok, "detail": s.detail})).collect();
            let body = serde_json::json!({
                "strategy": strategy.to_string(),
                "pattern_vertices": pattern.n(),
                "success": validated,
                "colour": r.colour.filter(|_| validated).map(|c| c.name()),
                "case": r.case.map(|c| format!("{c:?}").to_lowercase()),
                "embedding": r.map.as_ref().filter(|_| validated).map(|m| m.image.clone()),
                "log": log,
            });
            let config = serde_json::json!({"params": io::params_json(&p), "strategy": strategy.to_string(), "pattern": a.pattern.pattern.as_ref().map(|p| p.display().to_string()), "cubic": a.pattern.cubic});
            ctx.emit("embedding", io::json_with_manifest(&ctx.manifest(&config), body), None)
        }
        Command::CoupleTest(a) => {
            let kind: CouplingKind = a.kind.parse().map_err(anyhow::Error::msg)?;
            let mut setup = CouplingSetup::new(a.c, a.p);
            setup.z = a.z;
            if let Some(n) = a.n {
                setup.n = n;
            }
            let r = coupling_marginal_test(kind, &setup, a.trials, ctx.seed)?;
            if !r.passed {
                eprintln!("statistical target missed; see report");
            }
            let config = serde_json::to_value(&setup)?;
            let m = ctx.manifest(&serde_json::json!({"kind": kind.to_string(), "setup": config, "trials": a.trials}));
            let mut rows = Vec::new();
            if let Some(s) = &r.marginal {
                rows.push(vec!["marginal".into(), String::new(), s.observed.to_string(), s.target.to_string(), s.z_score.to_string(), String::new(), s.passed.to_string()]);
            }
            if let Some(s) = &r.distribution {
                rows.push(vec!["distribution".into(), String::new(), s.statistic.to_string(), s.dof.to_string(), String::new(), s.p_value.to_string(), s.passed.to_string()]);
            }
            for (i, s) in r.per_block.iter().enumerate() {
                rows.push(vec!["block".into(), i.to_string(), s.statistic.to_string(), s.dof.to_string(), String::new(), s.p_value.to_string(), s.passed.to_string()]);
            }
            rows.push(vec!["containment_violations".into(), String::new(), r.containment_violations.to_string(), String::new(), String::new(), String::new(), (r.containment_violations == 0).to_string()]);
            let csv = io::csv_with_manifest(&m, &["test", "index", "value", "reference", "z_score", "p_value", "passed"], &rows);
            ctx.emit("coupling", io::json_with_manifest(&m, serde_json::to_value(&r)?), Some(csv))
        }
        Command::Experiment { action: ExperimentAction::Run { host, pattern, strategy, trials } } => {
            let strategy = parse_strategy(&strategy)?;
            let p = ctx.params(&host)?;
            let source = match pattern.pattern {
                Some(f) => PatternSource::File(f),
                None => PatternSource::RandomCubic { n: pattern.cubic, seed: ctx.seed },
            };
            let mut cfg = ExperimentConfig::new(p, source, strategy, trials, ctx.seed);
            cfg.ramsey.ell = pattern.ell;
            let report = run_experiment(&cfg)?;
            match &ctx.out {
                Some(dir) => {
                    write_report(&report, dir)?;
                    eprintln!("wrote {}", dir.display());
                    Ok(())
                }
                None => ctx.emit("experiment", report_json(&report), Some(report_csv(&report))),
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

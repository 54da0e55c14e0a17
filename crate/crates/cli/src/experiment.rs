//! Monte Carlo campaigns: colour a host, embed a pattern, validate, record.

use crate::colour::{colour_host, Strategy};
use crate::io::{self, Manifest};
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use sizeramsey_core::embedding::{ramsey_embed, validate_embedding, RamseyCase, RamseyConfig};
use sizeramsey_core::host::{assemble_host, host_edge_budget_report, LayeredHost};
use sizeramsey_core::params::ParameterSet;
use sizeramsey_core::random::random_regular;
use sizeramsey_core::rng::{derive_seed, Phase};
use sizeramsey_core::{Colour, Graph};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq)]
pub enum PatternSource {
    File(PathBuf),
    /// Trial `t` uses a random cubic graph drawn with seed `seed + t`.
    RandomCubic { n: usize, seed: u64 },
}

impl PatternSource {
    pub fn pattern(&self, trial: u64) -> Result<Graph> {
        match self {
            PatternSource::File(p) => io::read_graph(p),
            PatternSource::RandomCubic { n, seed } => {
                random_regular(*n, 3, seed.wrapping_add(trial)).with_context(|| format!("no cubic graph on {n} vertices"))
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            PatternSource::File(p) => format!("file:{}", p.display()),
            PatternSource::RandomCubic { n, seed } => format!("random-cubic:{n}:{seed}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub params: ParameterSet,
    pub pattern_source: PatternSource,
    pub colouring_strategy: Strategy,
    pub trials: usize,
    pub seed: u64,
    /// Reports are written here when set.
    pub output_dir: Option<PathBuf>,
    pub ramsey: RamseyConfig,
}

impl ExperimentConfig {
    pub fn new(params: ParameterSet, pattern_source: PatternSource, colouring_strategy: Strategy, trials: usize, seed: u64) -> Self {
        ExperimentConfig { params, pattern_source, colouring_strategy, trials, seed, output_dir: None, ramsey: RamseyConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if let PatternSource::RandomCubic { n, .. } = self.pattern_source {
            if n % 2 == 1 || n < 4 {
                bail!("a cubic pattern needs an even n >= 4, got {n}");
            }
        }
        Ok(())
    }

    /// Canonical description hashed into the manifest.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": io::params_json(&self.params),
            "pattern_source": self.pattern_source.describe(),
            "colouring_strategy": self.colouring_strategy.to_string(),
            "trials": self.trials,
            "seed": self.seed,
            "ramsey_seed_base": self.ramsey.seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub strategy: String,
    pub pattern_vertices: usize,
    pub success: bool,
    pub colour: Option<String>,
    pub case: Option<String>,
    pub failed_stage: Option<String>,
    /// `stage:ok` / `stage:fail` joined by `;`.
    pub stages: String,
    pub validated: bool,
    pub red_edges: usize,
    pub blue_edges: usize,
    pub host_edges: usize,
    pub base_edges: usize,
    pub cube_layer_edges: usize,
    /// Image of each pattern vertex, present only for validated embeddings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<usize>>,
}

pub const CSV_COLUMNS: [&str; 15] = [
    "trial", "seed", "strategy", "pattern_vertices", "success", "colour", "case", "failed_stage", "stages", "validated",
    "red_edges", "blue_edges", "host_edges", "base_edges", "cube_layer_edges",
];

impl TrialRow {
    fn csv(&self) -> Vec<String> {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        vec![
            self.trial.to_string(),
            self.seed.to_string(),
            self.strategy.clone(),
            self.pattern_vertices.to_string(),
            self.success.to_string(),
            opt(&self.colour),
            opt(&self.case),
            opt(&self.failed_stage),
            self.stages.clone(),
            self.validated.to_string(),
            self.red_edges.to_string(),
            self.blue_edges.to_string(),
            self.host_edges.to_string(),
            self.base_edges.to_string(),
            self.cube_layer_edges.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// 95% Wilson interval of the success rate.
    pub success_interval: (f64, f64),
    pub red_successes: usize,
    pub blue_successes: usize,
    pub case_one: usize,
    pub case_two: usize,
    /// First failed stage to number of trials.
    pub failures_by_stage: BTreeMap<String, usize>,
    pub host_vertices: usize,
    pub host_edges: usize,
    pub host_layers: usize,
    pub expected_base_edges: f64,
    pub host_edge_threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub manifest: Manifest,
    pub rows: Vec<TrialRow>,
    pub aggregate: Aggregate,
    /// Wall-clock milliseconds per trial. Kept out of the report files so they stay byte-identical.
    #[serde(skip)]
    pub runtimes_ms: Vec<f64>,
}

fn wilson(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (k, n) = (successes as f64, n as f64);
    let phat = k / n;
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn run_trial(cfg: &ExperimentConfig, host: &LayeredHost, t: usize) -> Result<(TrialRow, f64)> {
    let start = Instant::now();
    let seed = derive_seed(cfg.seed, Phase::Trial, t as u64);
    let pattern = cfg.pattern_source.pattern(t as u64)?;
    let colouring = colour_host(host, &cfg.colouring_strategy, seed);
    let ramsey = RamseyConfig { seed, ..cfg.ramsey.clone() };
    let report = ramsey_embed(host, &colouring, &pattern, &ramsey)?;
    let mut validated = false;
    let mut embedding = None;
    if let (Some(map), Some(colour)) = (&report.map, report.colour) {
        let check = validate_embedding(&pattern, &host.host, map, Some((&colouring, colour)), None);
        validated = check.is_valid();
        if validated {
            embedding = Some(map.image.clone());
        }
    }
    let budget = host_edge_budget_report(host);
    let row = TrialRow {
        trial: t,
        seed,
        strategy: cfg.colouring_strategy.to_string(),
        pattern_vertices: pattern.n(),
        success: validated,
        colour: report.colour.filter(|_| validated).map(|c| c.name().to_string()),
        case: report.case.map(|c| match c {
            RamseyCase::One => "one".to_string(),
            RamseyCase::Two => "two".to_string(),
        }),
        failed_stage: if validated {
            None
        } else if report.success() {
            Some("validation".to_string())
        } else {
            report.failed_stage().map(|s| s.stage.to_string())
        },
        stages: report.log.iter().map(|s| format!("{}:{}", s.stage, if s.ok { "ok" } else { "fail" })).collect::<Vec<_>>().join(";"),
        validated,
        red_edges: colouring.count(Colour::Red),
        blue_edges: colouring.count(Colour::Blue),
        host_edges: budget.host_edges,
        base_edges: budget.base_edges,
        cube_layer_edges: budget.cube_layer_edges,
        embedding,
    };
    Ok((row, start.elapsed().as_secs_f64() * 1e3))
}

/// Assembles the host once from the master seed and runs the trials in
/// parallel; rows come back in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let host = assemble_host(&cfg.params, cfg.seed)?;
    let results: Vec<Result<(TrialRow, f64)>> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &host, t)).collect();
    let mut rows = Vec::with_capacity(cfg.trials);
    let mut runtimes_ms = Vec::with_capacity(cfg.trials);
    let mut first_error = None;
    for r in results {
        match r {
            Ok((row, ms)) => {
                rows.push(row);
                runtimes_ms.push(ms);
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let budget = host_edge_budget_report(&host);
    let successes = rows.iter().filter(|r| r.success).count();
    let mut failures_by_stage = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.success) {
        *failures_by_stage.entry(r.failed_stage.clone().unwrap_or_else(|| "unknown".into())).or_insert(0) += 1;
    }
    let aggregate = Aggregate {
        trials: rows.len(),
        successes,
        success_rate: if rows.is_empty() { 0.0 } else { successes as f64 / rows.len() as f64 },
        success_interval: wilson(successes, rows.len()),
        red_successes: rows.iter().filter(|r| r.success && r.colour.as_deref() == Some("red")).count(),
        blue_successes: rows.iter().filter(|r| r.success && r.colour.as_deref() == Some("blue")).count(),
        case_one: rows.iter().filter(|r| r.case.as_deref() == Some("one")).count(),
        case_two: rows.iter().filter(|r| r.case.as_deref() == Some("two")).count(),
        failures_by_stage,
        host_vertices: host.n(),
        host_edges: host.host.m(),
        host_layers: host.z(),
        expected_base_edges: budget.expected_base_edges,
        host_edge_threshold: budget.host_threshold,
    };
    let report = ExperimentReport { manifest: Manifest::new(cfg.seed, &cfg.to_json()), rows, aggregate, runtimes_ms };
    if let Some(dir) = &cfg.output_dir {
        write_report(&report, dir)?;
    }
    match first_error {
        Some(e) => Err(e.context(format!("experiment aborted; {} rows completed", report.rows.len()))),
        None => Ok(report),
    }
}

pub fn report_csv(report: &ExperimentReport) -> String {
    let rows: Vec<Vec<String>> = report.rows.iter().map(|r| r.csv()).collect();
    io::csv_with_manifest(&report.manifest, &CSV_COLUMNS, &rows)
}

pub fn report_json(report: &ExperimentReport) -> String {
    let body = serde_json::json!({ "aggregate": report.aggregate, "rows": report.rows });
    io::json_with_manifest(&report.manifest, body)
}

/// Writes `trials.csv` and `aggregate.json`, plus `timings.csv` with the
/// non-reproducible wall-clock times.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("trials.csv"), report_csv(report)).context("writing trials.csv")?;
    fs::write(dir.join("aggregate.json"), report_json(report)).context("writing aggregate.json")?;
    let timing_rows: Vec<Vec<String>> = report.rows.iter().zip(&report.runtimes_ms).map(|(r, ms)| vec![r.trial.to_string(), format!("{ms:.3}")]).collect();
    fs::write(dir.join("timings.csv"), io::csv_with_manifest(&report.manifest, &["trial", "runtime_ms"], &timing_rows)).context("writing timings.csv")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(strategy: Strategy, trials: usize) -> ExperimentConfig {
        let mut p = ParameterSet::desk(501, 3).unwrap();
        p.delta = 0.4;
        p.z = Some(4);
        p.eta = 0.1;
        p.rederive(0).unwrap();
        ExperimentConfig::new(p, PatternSource::RandomCubic { n: 6, seed: 2 }, strategy, trials, 11)
    }

    #[test]
    fn zero_trials_is_rejected() {
        assert!(run_experiment(&small_config(Strategy::AllRed, 0)).is_err());
    }

    #[test]
    fn odd_cubic_pattern_is_rejected() {
        let mut cfg = small_config(Strategy::AllRed, 1);
        cfg.pattern_source = PatternSource::RandomCubic { n: 7, seed: 0 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn one_all_red_trial_succeeds() {
        let r = run_experiment(&small_config(Strategy::AllRed, 1)).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].success, "{:?}", r.rows[0]);
        assert_eq!(r.rows[0].colour.as_deref(), Some("red"));
        assert_eq!(r.aggregate.successes, 1);
    }

    #[test]
    fn rows_never_carry_unvalidated_embeddings() {
        let r = run_experiment(&small_config(Strategy::UniformRandom { bias: 0.5 }, 4)).unwrap();
        for row in &r.rows {
            assert_eq!(row.embedding.is_some(), row.validated);
            assert_eq!(row.success, row.validated);
        }
    }

    #[test]
    fn wilson_interval_brackets_the_rate() {
        let (lo, hi) = wilson(8, 10);
        assert!(lo < 0.8 && 0.8 < hi);
        assert_eq!(wilson(0, 0), (0.0, 1.0));
    }
}

//! File formats: graphs, designs, parameter files and report manifests.
//!
//! Graphs are JSON `{"n": 10, "edges": [[0, 1], ...]}`. Parameter files are
//! JSON objects whose keys are parameter names (`"delta": 0.3`, `"z": 4`).
//! Every emitted file starts with a manifest: a `#`-prefixed first line in
//! CSV, a `manifest` member in JSON.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sizeramsey_core::design::BlockDesign;
use sizeramsey_core::params::ParameterSet;
use sizeramsey_core::Graph;
use std::fs;
use std::path::Path;

pub const TOOL: &str = "sizeramsey";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile { n: g.n(), edges: g.edges().collect() }
    }
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Graph> {
        Ok(Graph::new(self.n, self.edges.iter().copied())?)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: GraphFile = serde_json::from_str(&text).with_context(|| format!("parsing graph {}", path.display()))?;
    file.to_graph()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub n: usize,
    pub block_size: usize,
    pub blocks: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel_classes: Option<Vec<Vec<usize>>>,
}

impl From<&BlockDesign> for DesignFile {
    fn from(d: &BlockDesign) -> Self {
        DesignFile { n: d.n, block_size: d.block_size, blocks: d.blocks.clone(), parallel_classes: d.parallel_classes.clone() }
    }
}

impl From<DesignFile> for BlockDesign {
    fn from(f: DesignFile) -> Self {
        BlockDesign { n: f.n, block_size: f.block_size, blocks: f.blocks, parallel_classes: f.parallel_classes }
    }
}

pub fn read_design(path: &Path) -> Result<BlockDesign> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: DesignFile = serde_json::from_str(&text).with_context(|| format!("parsing design {}", path.display()))?;
    Ok(file.into())
}

/// Applies a JSON object of overrides. Setting `n`, `delta` or `C` without any
/// probability rederives the chain; explicit probabilities win.
pub fn apply_overrides(params: &mut ParameterSet, overrides: &serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let structural = ["n", "delta", "C"].iter().any(|k| overrides.contains_key(*k));
    let explicit_p = overrides.keys().any(|k| k.starts_with("p"));
    for (k, v) in overrides {
        if explicit_p && k.starts_with('p') {
            continue;
        }
        params.assign(k, &value_text(v))?;
    }
    if structural {
        params.rederive(params.z.unwrap_or(0))?;
    }
    for (k, v) in overrides.iter().filter(|(k, _)| explicit_p && k.starts_with('p')) {
        params.assign(k, &value_text(v))?;
    }
    if overrides.contains_key("p") || overrides.contains_key("p_prime") {
        let z = params.z.unwrap_or(0);
        let mut completed = params.clone();
        completed.complete_chain(z)?;
        for key in ["p_tilde", "p_tilde_prime", "p_union", "p_tilde_union"] {
            if !overrides.contains_key(key) {
                let v = completed.entries().into_iter().find(|(k, _)| *k == key).map(|(_, v)| v).expect("known key");
                params.assign(key, &v)?;
            }
        }
    }
    Ok(())
}

fn value_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Desk parameters for `n` and `C`, then the overrides in `path` if given.
pub fn load_params(path: Option<&Path>, n: usize, c: usize) -> Result<ParameterSet> {
    let mut params = ParameterSet::desk(n, c)?;
    if let Some(path) = path {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text).with_context(|| format!("parsing parameters {}", path.display()))?;
        apply_overrides(&mut params, &map)?;
    }
    Ok(params)
}

pub fn params_json(params: &ParameterSet) -> serde_json::Value {
    let map = params.entries().into_iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v))).collect();
    serde_json::Value::Object(map)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    /// SHA-256 of the canonical configuration text.
    pub config_sha256: String,
}

impl Manifest {
    pub fn new(seed: u64, config: &serde_json::Value) -> Self {
        Manifest { tool: TOOL.into(), version: VERSION.into(), seed, config_sha256: sha256_hex(config.to_string().as_bytes()) }
    }

    pub fn csv_line(&self) -> String {
        format!("# {} {} seed={} config_sha256={}", self.tool, self.version, self.seed, self.config_sha256)
    }
}

/// Pretty JSON with the manifest as the first member.
pub fn json_with_manifest(manifest: &Manifest, body: serde_json::Value) -> String {
    let mut out = serde_json::Map::new();
    out.insert("manifest".into(), serde_json::to_value(manifest).expect("plain struct"));
    match body {
        serde_json::Value::Object(map) => out.extend(map),
        other => {
            out.insert("data".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(out)).expect("serialisable");
    s.push('\n');
    s
}

/// CSV with the manifest line, a header and quoted cells where needed.
pub fn csv_with_manifest(manifest: &Manifest, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = manifest.csv_line();
    s.push('\n');
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::petersen();
        let text = serde_json::to_string(&GraphFile::from(&g)).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let f = GraphFile { n: 3, edges: vec![(0, 5)] };
        assert!(f.to_graph().is_err());
    }

    #[test]
    fn csv_quotes_awkward_cells() {
        let m = Manifest::new(1, &serde_json::json!({}));
        let s = csv_with_manifest(&m, &["a", "b"], &[vec!["x,y".into(), "say \"hi\"".into()]]);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# sizeramsey"));
        assert_eq!(lines[2], "\"x,y\",\"say \"\"hi\"\"\"");
    }

    #[test]
    fn structural_overrides_rederive_the_chain() {
        let mut p = ParameterSet::desk(501, 3).unwrap();
        let map = serde_json::json!({"delta": 0.4, "z": 4}).as_object().unwrap().clone();
        apply_overrides(&mut p, &map).unwrap();
        let mut q = ParameterSet::desk(501, 3).unwrap();
        q.delta = 0.4;
        q.z = Some(4);
        q.rederive(4).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn explicit_p_completes_the_chain() {
        let mut p = ParameterSet::desk(7, 3).unwrap();
        let map = serde_json::json!({"p": 1.0}).as_object().unwrap().clone();
        apply_overrides(&mut p, &map).unwrap();
        assert_eq!(p.probabilities.p, 1.0);
        assert!((p.probabilities.p_tilde - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_parameter_is_an_error() {
        let mut p = ParameterSet::desk(7, 3).unwrap();
        let map = serde_json::json!({"zeta": 1}).as_object().unwrap().clone();
        assert!(apply_overrides(&mut p, &map).is_err());
    }
}

//! End-to-end runs: ingest, preprocess, analyse, write reports and a manifest.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::balance::{undirected_balance, BalanceMode, BalanceReport, BalanceTally};
use crate::census::{census, fold_triads, CensusTable};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, cancelled_pairs, dump_tsv, load_edge_records, preprocess, project_undirected,
    InputFormat, NodeIndex, PreprocessConfig, SignedDigraph, SignedGraph,
};
use crate::report::{balance_csv, ComparisonReport, PartialSummary};
use crate::signstats::{
    composition_from_tally, composition_undirected, metrics, CompositionTable, GraphMetrics,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Census,
    Balance,
    Composition,
    Metrics,
    UndirectedCompare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub preprocess: PreprocessConfig,
    pub analyses: BTreeSet<Analysis>,
    pub out_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
    pub balance_mode: BalanceMode,
}

impl RunConfig {
    pub fn new(
        input: impl Into<PathBuf>,
        format: InputFormat,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        RunConfig {
            input: input.into(),
            format,
            preprocess: PreprocessConfig::default(),
            analyses: BTreeSet::from([Analysis::Balance]),
            out_dir: out_dir.into(),
            emit: BTreeSet::from([Emit::Json, Emit::Csv]),
            balance_mode: BalanceMode::TypeMean,
        }
    }

    pub fn network_name(&self) -> String {
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "network".to_string())
    }

    fn validate(&self) -> Result<()> {
        if self.analyses.is_empty() {
            return Err(Error::InvalidArgument(
                "select at least one analysis".into(),
            ));
        }
        if self.emit.is_empty() {
            return Err(Error::InvalidArgument(
                "select at least one output format".into(),
            ));
        }
        if !self.preprocess.sign_threshold.is_finite() {
            return Err(Error::InvalidArgument("threshold must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphCounts {
    pub nodes: usize,
    pub edges: usize,
}

impl From<&SignedDigraph> for GraphCounts {
    fn from(g: &SignedDigraph) -> Self {
        GraphCounts {
            nodes: g.node_count(),
            edges: g.edge_count(),
        }
    }
}

/// A loaded and preprocessed network, ready for analysis.
pub struct Prepared {
    pub records: usize,
    pub input_sha256: String,
    pub built: SignedDigraph,
    pub graph: SignedDigraph,
    pub projection: SignedGraph,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn prepare(input: &Path, format: InputFormat, config: &PreprocessConfig) -> Result<Prepared> {
    let bytes = fs::read(input).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingInput(input.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let records = load_edge_records(bytes.as_slice(), format)?;
    let built = build_graph(&records, config);
    let graph = preprocess(&built, config);
    let projection = project_undirected(&graph);
    Ok(Prepared {
        records: records.len(),
        input_sha256: sha256_hex(&bytes),
        built,
        graph,
        projection,
    })
}

/// Every file of one run, rendered in memory before anything is written.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub files: Vec<(String, String)>,
    pub census: Option<CensusTable>,
    pub balance: Option<BalanceReport>,
    pub comparison: Option<ComparisonReport>,
    pub metrics: Option<GraphMetrics>,
    pub composition: Option<[CompositionTable; 2]>,
    pub before: Option<GraphCounts>,
    pub after: Option<GraphCounts>,
}

impl RunOutcome {
    fn push(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn triple_ids(g: &SignedDigraph, nodes: [NodeIndex; 3]) -> [String; 3] {
    nodes.map(|v| g.id(v).to_string())
}

/// Side-by-side directed and undirected figures for a prepared network.
pub fn comparison(
    network: &str,
    graph: &SignedDigraph,
    projection: &SignedGraph,
    mode: BalanceMode,
) -> Result<ComparisonReport> {
    let tally = BalanceTally::of_graph(graph);
    let undirected = undirected_balance(projection);
    let report = BalanceReport::from_tally(&tally, mode, Some(undirected))?;
    let composition_directed = composition_from_tally(&tally);
    let composition_undirected = composition_undirected(projection);
    let identical = composition_directed
        .proportions()
        .iter()
        .zip(composition_undirected.proportions())
        .all(|(a, b)| (a - b).abs() <= 1e-9)
        && composition_directed.total > 0
        && composition_undirected.total > 0;

    let transitive: HashSet<[NodeIndex; 3]> = fold_triads(
        graph,
        Vec::new,
        |acc, t| {
            if t.triad_type.is_transitive() {
                acc.push(t.nodes)
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .into_iter()
    .collect();
    let triangles: HashSet<[NodeIndex; 3]> = projection.triangles().map(|(n, _)| n).collect();

    let mut undirected_only: Vec<[NodeIndex; 3]> =
        triangles.difference(&transitive).copied().collect();
    let mut directed_only: Vec<[NodeIndex; 3]> =
        transitive.difference(&triangles).copied().collect();
    undirected_only.sort_unstable();
    directed_only.sort_unstable();

    Ok(ComparisonReport {
        network: network.to_string(),
        directed_partial: PartialSummary {
            ratio: report.overall,
            classification_counts: report.classification_counts,
        },
        directed_nonpartial: report.nonpartial,
        undirected,
        composition_directed,
        composition_undirected,
        identical_composition: identical,
        verdict: if identical {
            "directed = undirected"
        } else {
            "directed != undirected"
        }
        .to_string(),
        cancelled_edges: cancelled_pairs(graph)
            .into_iter()
            .map(|(u, v)| [graph.id(u).to_string(), graph.id(v).to_string()])
            .collect(),
        undirected_only_triangles: undirected_only
            .into_iter()
            .map(|t| triple_ids(graph, t))
            .collect(),
        directed_only_triads: directed_only
            .into_iter()
            .map(|t| triple_ids(graph, t))
            .collect(),
    })
}

/// Compute every selected analysis; nothing touches the filesystem except
/// reading the input.
pub fn render(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let prepared = prepare(&config.input, config.format, &config.preprocess)?;
    let network = config.network_name();
    let g = &prepared.graph;
    let json = config.emit.contains(&Emit::Json);
    let csv = config.emit.contains(&Emit::Csv);
    let mut out = RunOutcome::default();

    let tally = (config.analyses.contains(&Analysis::Balance)
        || config.analyses.contains(&Analysis::Composition))
    .then(|| BalanceTally::of_graph(g));

    for analysis in &config.analyses {
        match analysis {
            Analysis::Census => {
                let table = census(g);
                if csv {
                    out.push("census.csv", table.to_csv());
                }
                if json {
                    out.push("census.json", to_json(&table)?);
                }
                out.census = Some(table);
            }
            Analysis::Balance => {
                let tally = tally.as_ref().expect("tally computed for balance");
                let undirected = undirected_balance(&prepared.projection);
                let report =
                    BalanceReport::from_tally(tally, config.balance_mode, Some(undirected))?;
                if json {
                    out.push("balance.json", to_json(&report)?);
                }
                if csv {
                    out.push("balance.csv", balance_csv(&report));
                }
                out.balance = Some(report);
            }
            Analysis::Composition => {
                let tally = tally.as_ref().expect("tally computed for composition");
                let tables = [
                    composition_from_tally(tally),
                    composition_undirected(&prepared.projection),
                ];
                if csv {
                    let mut text = format!("{}\n", CompositionTable::CSV_HEADER);
                    for t in &tables {
                        text.push_str(&t.csv_row(&network));
                        text.push('\n');
                    }
                    out.push("composition.csv", text);
                }
                if json {
                    out.push("composition.json", to_json(&tables)?);
                }
                out.composition = Some(tables);
            }
            Analysis::Metrics => {
                let mut m = metrics(g)?;
                m.component_count = prepared.built.weak_components().len();
                if csv {
                    out.push("metrics.csv", m.to_csv(&network));
                }
                if json {
                    out.push("metrics.json", to_json(&m)?);
                }
                out.metrics = Some(m);
            }
            Analysis::UndirectedCompare => {
                let report = comparison(&network, g, &prepared.projection, config.balance_mode)?;
                if json {
                    out.push("compare.json", to_json(&report)?);
                }
                if csv {
                    out.push("compare.csv", report.to_csv());
                }
                out.comparison = Some(report);
            }
        }
    }

    out.push("graph.tsv", dump_tsv(g));
    let before = GraphCounts::from(&prepared.built);
    let after = GraphCounts::from(g);
    let mut files: Vec<&str> = out.files.iter().map(|(n, _)| n.as_str()).collect();
    files.push("manifest.json");
    let generated_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "generated_at": generated_at,
        "config": config,
        "input": {
            "path": config.input.display().to_string(),
            "format": config.format,
            "sha256": prepared.input_sha256,
            "records": prepared.records,
        },
        "counts": {
            "before_preprocessing": before,
            "after_preprocessing": after,
        },
        "files": files,
    });
    out.push("manifest.json", to_json(&manifest)?);
    out.before = Some(before);
    out.after = Some(after);
    Ok(out)
}

/// Render and write one file per selected analysis plus the graph dump and
/// manifest into `config.out_dir`.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let outcome = render(config)?;
    fs::create_dir_all(&config.out_dir)?;
    for (name, contents) in &outcome.files {
        fs::write(config.out_dir.join(name), contents)?;
    }
    Ok(outcome)
}

/// Comparison run: the undirected-compare analysis alone.
pub fn compare(config: &RunConfig) -> Result<RunOutcome> {
    let mut cfg = config.clone();
    cfg.analyses = BTreeSet::from([Analysis::UndirectedCompare]);
    run(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_selection_rejected() {
        let mut cfg = RunConfig::new("x.tsv", InputFormat::TsvSign, "out");
        cfg.analyses.clear();
        assert!(matches!(render(&cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn missing_input() {
        let cfg = RunConfig::new("/definitely/not/here.tsv", InputFormat::TsvSign, "out");
        assert!(matches!(render(&cfg), Err(Error::MissingInput(_))));
    }
}

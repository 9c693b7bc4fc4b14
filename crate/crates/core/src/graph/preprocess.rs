use std::collections::HashMap;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::{EdgeRecord, IdTable, NodeIndex, Sign, SignedDigraph, SignedGraph};

/// How repeated records for one ordered pair collapse to a single score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregateRule {
    #[default]
    #[value(name = "sum")]
    SumThenSign,
    /// Last record in input order; timestamps are not consulted.
    #[value(name = "last")]
    LastRecord,
    #[value(name = "mean")]
    MeanThenSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentRule {
    #[default]
    Giant,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub sign_threshold: f64,
    pub aggregate_rule: AggregateRule,
    pub prune_pendants: bool,
    pub keep_component: ComponentRule,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            sign_threshold: 0.0,
            aggregate_rule: AggregateRule::SumThenSign,
            prune_pendants: true,
            keep_component: ComponentRule::Giant,
        }
    }
}

#[derive(Default)]
struct Aggregate {
    sum: f64,
    count: usize,
    last: f64,
}

/// Collapse records into a signed digraph.
///
/// Self-loops are dropped, parallel records are aggregated per
/// `config.aggregate_rule`, and aggregates equal to the threshold produce no
/// edge. The node set is the endpoints of the surviving edges.
pub fn build_graph(records: &[EdgeRecord], config: &PreprocessConfig) -> SignedDigraph {
    let mut order: Vec<(&str, &str)> = Vec::new();
    let mut scores: HashMap<(&str, &str), Aggregate> = HashMap::new();
    for rec in records {
        if rec.source == rec.target {
            continue;
        }
        let key = (rec.source.as_str(), rec.target.as_str());
        let agg = scores.entry(key).or_insert_with(|| {
            order.push(key);
            Aggregate::default()
        });
        agg.sum += rec.weight;
        agg.count += 1;
        agg.last = rec.weight;
    }

    let threshold = config.sign_threshold;
    let edges: Vec<(&str, &str, Sign)> = order
        .into_iter()
        .filter_map(|key| {
            let agg = &scores[&key];
            let score = match config.aggregate_rule {
                AggregateRule::SumThenSign => agg.sum,
                AggregateRule::LastRecord => agg.last,
                AggregateRule::MeanThenSign => agg.sum / agg.count as f64,
            };
            if score > threshold {
                Some((key.0, key.1, Sign::Positive))
            } else if score < threshold {
                Some((key.0, key.1, Sign::Negative))
            } else {
                None
            }
        })
        .collect();
    SignedDigraph::from_edges(edges).expect("aggregated edges are unique and loop-free")
}

/// Largest weakly connected component; ties go to the component holding the
/// smallest node id.
fn giant_component(graph: &SignedDigraph) -> SignedDigraph {
    let components = graph.weak_components();
    let Some(best) = components
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(_, c)| c)
    else {
        return graph.clone();
    };
    if best.len() == graph.node_count() {
        return graph.clone();
    }
    let mut keep = vec![false; graph.node_count()];
    for &v in best {
        keep[v] = true;
    }
    graph.induced(&keep)
}

/// Remove nodes of total degree ≤ 1 until none remain.
fn prune_pendants(graph: &SignedDigraph) -> SignedDigraph {
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.total_degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<NodeIndex> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        let touching = graph
            .out_edges(v)
            .iter()
            .chain(graph.in_edges(v))
            .map(|&(w, _)| w);
        for w in touching {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    queue.push(w);
                }
            }
        }
    }
    if alive.iter().all(|&a| a) {
        graph.clone()
    } else {
        graph.induced(&alive)
    }
}

pub fn preprocess(graph: &SignedDigraph, config: &PreprocessConfig) -> SignedDigraph {
    let giant = config.keep_component == ComponentRule::Giant;
    let mut g = if giant {
        giant_component(graph)
    } else {
        graph.clone()
    };
    if config.prune_pendants {
        g = prune_pendants(&g);
        if giant {
            g = giant_component(&g);
        }
    }
    g
}

/// Collapse reciprocal edges. Agreeing pairs keep their sign, mismatched pairs
/// cancel, single directions carry over.
pub fn project_undirected(graph: &SignedDigraph) -> SignedGraph {
    let mut pairs = Vec::new();
    for (u, v, s) in graph.edges() {
        match graph.sign(v, u) {
            None => pairs.push((u.min(v), u.max(v), s)),
            Some(back) if u < v && back == s => pairs.push((u, v, s)),
            _ => {}
        }
    }
    pairs.sort_unstable_by_key(|&(u, v, _)| (u, v));
    SignedGraph::from_sorted_pairs(
        IdTable {
            ids: graph.ids.ids.clone(),
            lookup: graph.ids.lookup.clone(),
        },
        &pairs,
    )
}

/// Unordered pairs `{u, v}` (u < v) whose reciprocal edges disagree in sign.
pub fn cancelled_pairs(graph: &SignedDigraph) -> Vec<(NodeIndex, NodeIndex)> {
    graph
        .edges()
        .filter(|&(u, v, s)| u < v && graph.sign(v, u).is_some_and(|b| b != s))
        .map(|(u, v, _)| (u, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str, t: &str, w: f64) -> EdgeRecord {
        EdgeRecord::new(s, t, w)
    }

    fn edge_list(g: &SignedDigraph) -> Vec<(String, String, Sign)> {
        g.edges()
            .map(|(u, v, s)| (g.id(u).to_string(), g.id(v).to_string(), s))
            .collect()
    }

    #[test]
    fn sum_then_sign() {
        let cfg = PreprocessConfig::default();
        let g = build_graph(&[rec("a", "b", 3.0), rec("a", "b", -1.0)], &cfg);
        assert_eq!(
            edge_list(&g),
            vec![("a".into(), "b".into(), Sign::Positive)]
        );
    }

    #[test]
    fn sum_at_threshold_drops_edge() {
        let g = build_graph(
            &[rec("a", "b", 2.0), rec("a", "b", -2.0)],
            &PreprocessConfig::default(),
        );
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 0);
    }

    #[test]
    fn self_loop_dropped() {
        let g = build_graph(&[rec("a", "a", 5.0)], &PreprocessConfig::default());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn other_aggregate_rules_and_threshold() {
        let recs = [rec("a", "b", 3.0), rec("a", "b", 1.0), rec("a", "b", -1.0)];
        let last = PreprocessConfig {
            aggregate_rule: AggregateRule::LastRecord,
            ..Default::default()
        };
        assert_eq!(build_graph(&recs, &last).sign(0, 1), Some(Sign::Negative));
        let mean = PreprocessConfig {
            aggregate_rule: AggregateRule::MeanThenSign,
            sign_threshold: 1.0,
            ..Default::default()
        };
        // mean 1.0 sits on the threshold
        assert_eq!(build_graph(&recs, &mean).edge_count(), 0);
        let strict = PreprocessConfig {
            sign_threshold: 3.5,
            ..Default::default()
        };
        assert_eq!(build_graph(&recs, &strict).sign(0, 1), Some(Sign::Negative));
    }

    fn digraph(edges: &[(&str, &str)]) -> SignedDigraph {
        SignedDigraph::from_edges(edges.iter().map(|&(u, v)| (u, v, Sign::Positive))).unwrap()
    }

    #[test]
    fn path_plus_isolated_prunes_to_nothing() {
        let g = SignedDigraph::with_nodes(
            ["d"],
            [("a", "b", Sign::Positive), ("b", "c", Sign::Positive)],
        )
        .unwrap();
        let giant_only = preprocess(
            &g,
            &PreprocessConfig {
                prune_pendants: false,
                ..Default::default()
            },
        );
        assert_eq!(giant_only.ids(), &["a", "b", "c"]);
        let pruned = preprocess(&g, &PreprocessConfig::default());
        assert!(pruned.is_empty());
    }

    #[test]
    fn triangle_keeps_core_drops_pendant() {
        let g = digraph(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]);
        let p = preprocess(&g, &PreprocessConfig::default());
        assert_eq!(p.ids(), &["a", "b", "c"]);
        assert_eq!(p.edge_count(), 3);
    }

    #[test]
    fn giant_component_selection() {
        let g = digraph(&[("a", "b"), ("b", "c"), ("c", "d"), ("x", "y"), ("y", "z")]);
        let cfg = PreprocessConfig {
            prune_pendants: false,
            ..Default::default()
        };
        assert_eq!(preprocess(&g, &cfg).ids(), &["a", "b", "c", "d"]);

        // equal sizes: component with the smallest id wins
        let tie = digraph(&[("q", "r"), ("b", "c")]);
        assert_eq!(preprocess(&tie, &cfg).ids(), &["b", "c"]);

        let all = PreprocessConfig {
            prune_pendants: false,
            keep_component: ComponentRule::All,
            ..Default::default()
        };
        assert_eq!(preprocess(&g, &all).node_count(), 7);
    }

    #[test]
    fn mutual_dyad_counts_twice() {
        // a<->b plus triangle b,c,d: a has degree 2 and survives
        let g = digraph(&[("a", "b"), ("b", "a"), ("b", "c"), ("c", "d"), ("d", "b")]);
        let p = preprocess(&g, &PreprocessConfig::default());
        assert_eq!(p.node_count(), 4);
    }

    #[test]
    fn projection_rules() {
        let g = SignedDigraph::from_edges([
            ("u", "v", Sign::Positive),
            ("v", "u", Sign::Positive),
            ("u", "w", Sign::Positive),
            ("w", "u", Sign::Negative),
            ("v", "w", Sign::Negative),
        ])
        .unwrap();
        let p = project_undirected(&g);
        let (u, v, w) = (0, 1, 2);
        assert_eq!(p.sign(u, v), Some(Sign::Positive));
        assert_eq!(p.sign(u, w), None);
        assert_eq!(p.sign(v, w), Some(Sign::Negative));
        assert_eq!(p.sign(w, v), Some(Sign::Negative));
        assert_eq!(p.edge_count(), 2);
        assert_eq!(cancelled_pairs(&g), vec![(u, w)]);
    }
}

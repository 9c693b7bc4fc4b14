//! Sign composition of triples and triangles, and descriptive network
//! measures.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balance::{triangle_negative_counts, BalanceTally};
use crate::error::{Error, Result};
use crate::graph::{NodeIndex, SignedDigraph, SignedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionBasis {
    DirectedTriples,
    UndirectedTriangles,
}

impl CompositionBasis {
    pub fn name(self) -> &'static str {
        match self {
            CompositionBasis::DirectedTriples => "directed-triples",
            CompositionBasis::UndirectedTriangles => "undirected-triangles",
        }
    }
}

/// Share of each sign multiset among triples (or triangles).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositionTable {
    pub basis: CompositionBasis,
    pub total: u64,
    /// Raw counts for `+++`, `+--`, `++-`, `---`.
    pub counts: [u64; 4],
    pub ppp: f64,
    pub pnn: f64,
    pub ppn: f64,
    pub nnn: f64,
}

impl CompositionTable {
    /// From counts indexed by number of negative signs (0..=3).
    pub fn from_negative_counts(basis: CompositionBasis, by_negatives: [u64; 4]) -> Self {
        let counts = [
            by_negatives[0],
            by_negatives[2],
            by_negatives[1],
            by_negatives[3],
        ];
        let total: u64 = counts.iter().sum();
        let share = |c: u64| {
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        };
        CompositionTable {
            basis,
            total,
            counts,
            ppp: share(counts[0]),
            pnn: share(counts[1]),
            ppn: share(counts[2]),
            nnn: share(counts[3]),
        }
    }

    pub fn proportions(&self) -> [f64; 4] {
        [self.ppp, self.pnn, self.ppn, self.nnn]
    }

    /// `+++` plus `+--`: the balanced share.
    pub fn balanced_share(&self) -> f64 {
        self.ppp + self.pnn
    }

    pub const CSV_HEADER: &'static str = "network,basis,ppp,pnn,ppn,nnn,total";

    /// One CSV row under [`Self::CSV_HEADER`]; proportions to 2 decimals.
    pub fn csv_row(&self, network: &str) -> String {
        use crate::report::round2_str;
        format!(
            "{},{},{},{},{},{},{}",
            network,
            self.basis.name(),
            round2_str(self.ppp),
            round2_str(self.pnn),
            round2_str(self.ppn),
            round2_str(self.nnn),
            self.total
        )
    }
}

pub fn composition_from_tally(tally: &BalanceTally) -> CompositionTable {
    CompositionTable::from_negative_counts(
        CompositionBasis::DirectedTriples,
        tally.negative_counts(),
    )
}

/// Sign multisets of every transitive triple, normalised by triple count.
pub fn composition_directed(graph: &SignedDigraph) -> CompositionTable {
    composition_from_tally(&BalanceTally::of_graph(graph))
}

/// Sign multisets of every triangle of the projection.
pub fn composition_undirected(graph: &SignedGraph) -> CompositionTable {
    CompositionTable::from_negative_counts(
        CompositionBasis::UndirectedTriangles,
        triangle_negative_counts(graph),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    /// Weakly connected components of the input graph.
    pub component_count: usize,
    /// Nodes of the giant component.
    pub node_count: usize,
    /// Directed edges of the giant component.
    pub edge_count: usize,
    pub transitivity: f64,
    pub density: f64,
    pub avg_path_length: f64,
    pub clustering_coefficient: f64,
    /// Transitivity, clustering and path length use the undirected skeleton.
    pub path_basis: String,
}

/// Unsigned undirected skeleton: sorted neighbour lists.
fn skeleton(graph: &SignedDigraph) -> Vec<&[NodeIndex]> {
    (0..graph.node_count())
        .map(|v| graph.neighbors(v))
        .collect()
}

fn sorted_intersection_count(a: &[NodeIndex], b: &[NodeIndex]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Triangles through each node of the skeleton.
fn local_triangles(adj: &[&[NodeIndex]]) -> Vec<u64> {
    (0..adj.len())
        .into_par_iter()
        .map(|v| {
            adj[v]
                .iter()
                .map(|&u| sorted_intersection_count(adj[v], adj[u]))
                .sum::<u64>()
                / 2
        })
        .collect()
}

fn bfs_distance_sum(
    adj: &[&[NodeIndex]],
    source: NodeIndex,
    dist: &mut [u32],
    queue: &mut VecDeque<NodeIndex>,
) -> (u64, u64) {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let (mut sum, mut reached) = (0u64, 0u64);
    while let Some(u) = queue.pop_front() {
        for &v in adj[u] {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                sum += dist[v] as u64;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    (sum, reached)
}

/// Descriptive measures of the giant component.
///
/// Density counts ordered pairs of the digraph. Transitivity, clustering and
/// average path length use the unsigned undirected skeleton.
pub fn metrics(graph: &SignedDigraph) -> Result<GraphMetrics> {
    let components = graph.weak_components();
    let component_count = components.len();
    let giant = components
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(_, c)| c);
    let giant = match giant {
        Some(c) if c.len() == graph.node_count() => graph.clone(),
        Some(c) => {
            let mut keep = vec![false; graph.node_count()];
            c.iter().for_each(|&v| keep[v] = true);
            graph.induced(&keep)
        }
        None => graph.clone(),
    };
    let n = giant.node_count();
    if n < 2 {
        return Err(Error::Undefined(format!(
            "average path length needs at least two connected nodes, giant component has {n}"
        )));
    }
    let adj = skeleton(&giant);
    let tri = local_triangles(&adj);

    let triangles3: u64 = tri.iter().sum();
    let wedges: u64 = adj
        .iter()
        .map(|nb| {
            let d = nb.len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let transitivity = if wedges == 0 {
        0.0
    } else {
        triangles3 as f64 / wedges as f64
    };

    let clustering_coefficient = adj
        .iter()
        .zip(&tri)
        .map(|(nb, &t)| {
            let d = nb.len() as f64;
            if nb.len() < 2 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1.0))
            }
        })
        .sum::<f64>()
        / n as f64;

    let (dist_sum, pairs) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), s| bfs_distance_sum(&adj, s, dist, queue),
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    Ok(GraphMetrics {
        component_count,
        node_count: n,
        edge_count: giant.edge_count(),
        transitivity,
        density: giant.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)),
        avg_path_length: dist_sum as f64 / pairs as f64,
        clustering_coefficient,
        path_basis: "undirected-skeleton".to_string(),
    })
}

impl GraphMetrics {
    /// Two-column CSV with one measure per row.
    pub fn to_csv(&self, network: &str) -> String {
        use crate::report::round2_str;
        let mut out = format!("measure,{network}\n");
        out.push_str(&format!("components,{}\n", self.component_count));
        out.push_str(&format!("giant_nodes,{}\n", self.node_count));
        out.push_str(&format!("giant_edges,{}\n", self.edge_count));
        out.push_str(&format!("transitivity,{}\n", round2_str(self.transitivity)));
        out.push_str(&format!("density,{}\n", round2_str(self.density)));
        out.push_str(&format!(
            "avg_path_length,{}\n",
            round2_str(self.avg_path_length)
        ));
        out.push_str(&format!(
            "clustering_coefficient,{}\n",
            round2_str(self.clustering_coefficient)
        ));
        out
    }
}

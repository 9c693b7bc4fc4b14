//! Signed graph data model.
//!
//! Node ids are opaque strings at the edges of the API. Internally every node
//! is a dense index; indices follow the natural order of the ids (numeric ids
//! compare numerically and sort before non-numeric ones), so "smallest index"
//! and "smallest id" coincide everywhere.

mod io;
mod preprocess;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::io::{dump_tsv, load_edge_records, write_dump, InputFormat};
pub use self::preprocess::{
    build_graph, cancelled_pairs, preprocess, project_undirected, AggregateRule, ComponentRule,
    PreprocessConfig,
};

/// Dense node index into a graph's id table.
pub type NodeIndex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Positive => f.write_str("+1"),
            Sign::Negative => f.write_str("-1"),
        }
    }
}

/// One raw, already-scored interaction between two nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
    pub timestamp: Option<i64>,
}

impl EdgeRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        EdgeRecord {
            source: source.into(),
            target: target.into(),
            weight,
            timestamp: None,
        }
    }
}

/// Natural ordering of node ids: integers numerically, then everything else
/// lexicographically.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Sorted ids plus the lookup table from id to index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct IdTable {
    ids: Vec<String>,
    lookup: HashMap<String, NodeIndex>,
}

impl IdTable {
    fn new(mut ids: Vec<String>) -> Self {
        ids.sort_by(|a, b| compare_ids(a, b));
        ids.dedup();
        let lookup = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        IdTable { ids, lookup }
    }

    fn index_of(&self, id: &str) -> Result<NodeIndex> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }
}

/// A signed digraph: at most one signed edge per ordered pair, no self-loops.
///
/// Immutable once built; share it freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    ids: IdTable,
    out: Vec<Vec<(NodeIndex, Sign)>>,
    inc: Vec<Vec<(NodeIndex, Sign)>>,
    // union of in- and out-neighbours, sorted
    adj: Vec<Vec<NodeIndex>>,
    edge_count: usize,
}

impl SignedDigraph {
    pub fn empty() -> Self {
        Self::assemble(IdTable::default(), Vec::new()).expect("empty graph is valid")
    }

    /// Graph whose node set is exactly the endpoints of `edges`.
    pub fn from_edges<S: AsRef<str>>(
        edges: impl IntoIterator<Item = (S, S, Sign)>,
    ) -> Result<Self> {
        Self::with_nodes(std::iter::empty::<&str>(), edges)
    }

    /// Graph over `nodes` plus every edge endpoint.
    pub fn with_nodes<N, S>(
        nodes: impl IntoIterator<Item = N>,
        edges: impl IntoIterator<Item = (S, S, Sign)>,
    ) -> Result<Self>
    where
        N: AsRef<str>,
        S: AsRef<str>,
    {
        let edges: Vec<(String, String, Sign)> = edges
            .into_iter()
            .map(|(u, v, s)| (u.as_ref().to_string(), v.as_ref().to_string(), s))
            .collect();
        let mut ids: Vec<String> = nodes.into_iter().map(|n| n.as_ref().to_string()).collect();
        for (u, v, _) in &edges {
            ids.push(u.clone());
            ids.push(v.clone());
        }
        let table = IdTable::new(ids);
        let indexed = edges
            .iter()
            .map(|(u, v, s)| Ok((table.index_of(u)?, table.index_of(v)?, *s)))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(table, indexed)
    }

    /// Graph on nodes `"0"..n` with index-addressed edges.
    pub fn from_index_edges(n: usize, edges: &[(NodeIndex, NodeIndex, Sign)]) -> Result<Self> {
        let table = IdTable::new((0..n).map(|i| i.to_string()).collect());
        if let Some(&(u, v, _)) = edges.iter().find(|&&(u, v, _)| u >= n || v >= n) {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {n} nodes"
            )));
        }
        Self::assemble(table, edges.to_vec())
    }

    fn assemble(ids: IdTable, mut edges: Vec<(NodeIndex, NodeIndex, Sign)>) -> Result<Self> {
        let n = ids.ids.len();
        edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
        for pair in edges.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {} -> {}",
                    ids.ids[pair[0].0], ids.ids[pair[0].1]
                )));
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v, s) in &edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on {}", ids.ids[u])));
            }
            out[u].push((v, s));
            inc[v].push((u, s));
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut inc {
            list.sort_unstable_by_key(|&(u, _)| u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(SignedDigraph {
            ids,
            out,
            inc,
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    pub fn id(&self, node: NodeIndex) -> &str {
        &self.ids.ids[node]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids.ids
    }

    pub fn index_of(&self, id: &str) -> Result<NodeIndex> {
        self.ids.index_of(id)
    }

    pub fn sign(&self, from: NodeIndex, to: NodeIndex) -> Option<Sign> {
        let list = &self.out[from];
        list.binary_search_by_key(&to, |&(v, _)| v)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, from: NodeIndex, to: NodeIndex) -> bool {
        self.sign(from, to).is_some()
    }

    /// Outgoing edges of `node`, sorted by target.
    pub fn out_edges(&self, node: NodeIndex) -> &[(NodeIndex, Sign)] {
        &self.out[node]
    }

    /// Incoming edges of `node`, sorted by source.
    pub fn in_edges(&self, node: NodeIndex) -> &[(NodeIndex, Sign)] {
        &self.inc[node]
    }

    /// Nodes joined to `node` by an edge in either direction, sorted.
    pub fn neighbors(&self, node: NodeIndex) -> &[NodeIndex] {
        &self.adj[node]
    }

    /// In-degree plus out-degree; a mutual dyad counts twice.
    pub fn total_degree(&self, node: NodeIndex) -> usize {
        self.out[node].len() + self.inc[node].len()
    }

    /// All edges ordered by (source, target).
    pub fn edges(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex, Sign)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, s)| (u, v, s)))
    }

    /// Subgraph induced by the nodes flagged in `keep`.
    pub fn induced(&self, keep: &[bool]) -> SignedDigraph {
        assert_eq!(keep.len(), self.node_count());
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut ids = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            remap[i] = ids.len();
            ids.push(self.ids.ids[i].clone());
        }
        let edges = self
            .edges()
            .filter(|&(u, v, _)| keep[u] && keep[v])
            .map(|(u, v, s)| (remap[u], remap[v], s))
            .collect();
        // ids stay in natural order because `keep` is scanned in index order
        let lookup = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Self::assemble(IdTable { ids, lookup }, edges).expect("induced subgraph of a valid graph")
    }

    /// Same structure with every sign negated.
    pub fn flipped(&self) -> SignedDigraph {
        let edges = self.edges().map(|(u, v, s)| (u, v, s.flipped())).collect();
        Self::assemble(self.ids.clone(), edges).expect("sign flip keeps graph valid")
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<NodeIndex>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }
}

/// Undirected signed graph: at most one signed edge per unordered pair.
///
/// Shares the id table (and therefore the node indices) of the digraph it
/// was projected from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    ids: IdTable,
    adj: Vec<Vec<(NodeIndex, Sign)>>,
    edge_count: usize,
}

impl SignedGraph {
    fn from_sorted_pairs(ids: IdTable, pairs: &[(NodeIndex, NodeIndex, Sign)]) -> Self {
        let mut adj = vec![Vec::new(); ids.ids.len()];
        for &(u, v, s) in pairs {
            adj[u].push((v, s));
            adj[v].push((u, s));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        SignedGraph {
            ids,
            adj,
            edge_count: pairs.len(),
        }
    }

    /// Undirected graph from `{u, v}` pairs. Pairs may be given in either
    /// orientation but each unordered pair at most once.
    pub fn from_edges<S: AsRef<str>>(
        edges: impl IntoIterator<Item = (S, S, Sign)>,
    ) -> Result<Self> {
        let edges: Vec<(String, String, Sign)> = edges
            .into_iter()
            .map(|(u, v, s)| (u.as_ref().to_string(), v.as_ref().to_string(), s))
            .collect();
        let ids = IdTable::new(
            edges
                .iter()
                .flat_map(|(u, v, _)| [u.clone(), v.clone()])
                .collect(),
        );
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v, s) in &edges {
            let (a, b) = (ids.index_of(u)?, ids.index_of(v)?);
            if a == b {
                return Err(Error::InvalidGraph(format!("self-edge on {u}")));
            }
            pairs.push((a.min(b), a.max(b), *s));
        }
        pairs.sort_unstable_by_key(|&(u, v, _)| (u, v));
        if pairs
            .windows(2)
            .any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::InvalidGraph("duplicate undirected edge".into()));
        }
        Ok(Self::from_sorted_pairs(ids, &pairs))
    }

    pub fn node_count(&self) -> usize {
        self.ids.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn id(&self, node: NodeIndex) -> &str {
        &self.ids.ids[node]
    }

    pub fn index_of(&self, id: &str) -> Result<NodeIndex> {
        self.ids.index_of(id)
    }

    pub fn sign(&self, u: NodeIndex, v: NodeIndex) -> Option<Sign> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn neighbors(&self, node: NodeIndex) -> &[(NodeIndex, Sign)] {
        &self.adj[node]
    }

    /// Edges as `(u, v, sign)` with `u < v`, ordered.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex, Sign)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, s)| (u, v, s))
        })
    }

    /// Every closed triangle `(a, b, c)` with `a < b < c` and its three edge
    /// signs `(ab, bc, ac)`, in lexicographic order.
    pub fn triangles(&self) -> impl Iterator<Item = ([NodeIndex; 3], [Sign; 3])> + '_ {
        (0..self.node_count()).flat_map(move |a| self.triangles_from(a))
    }

    pub(crate) fn triangles_from(&self, a: NodeIndex) -> Vec<([NodeIndex; 3], [Sign; 3])> {
        let mut found = Vec::new();
        let upper_a: Vec<(NodeIndex, Sign)> = self.adj[a]
            .iter()
            .copied()
            .filter(|&(v, _)| v > a)
            .collect();
        for (i, &(b, sab)) in upper_a.iter().enumerate() {
            // merge-intersect N(a) ∩ N(b) above b
            let rest = &upper_a[i + 1..];
            let nb = &self.adj[b];
            let (mut x, mut y) = (0, nb.partition_point(|&(w, _)| w <= b));
            while x < rest.len() && y < nb.len() {
                match rest[x].0.cmp(&nb[y].0) {
                    Ordering::Less => x += 1,
                    Ordering::Greater => y += 1,
                    Ordering::Equal => {
                        let (c, sac) = rest[x];
                        found.push(([a, b, c], [sab, nb[y].1, sac]));
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
        found
    }
}

//! Triad enumeration and the 16-class MAN census.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{NodeIndex, Sign, SignedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriadType {
    T003,
    T012,
    T102,
    T021D,
    T021U,
    T021C,
    T111D,
    T111U,
    T030T,
    T030C,
    T201,
    T120D,
    T120U,
    T120C,
    T210,
    T300,
}

impl TriadType {
    /// All classes in census order.
    pub const ALL: [TriadType; 16] = [
        TriadType::T003,
        TriadType::T012,
        TriadType::T102,
        TriadType::T021D,
        TriadType::T021U,
        TriadType::T021C,
        TriadType::T111D,
        TriadType::T111U,
        TriadType::T030T,
        TriadType::T030C,
        TriadType::T201,
        TriadType::T120D,
        TriadType::T120U,
        TriadType::T120C,
        TriadType::T210,
        TriadType::T300,
    ];

    /// The classes made up only of transitive triples.
    pub const TRANSITIVE: [TriadType; 4] = [
        TriadType::T030T,
        TriadType::T120D,
        TriadType::T120U,
        TriadType::T300,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TriadType::T003 => "003",
            TriadType::T012 => "012",
            TriadType::T102 => "102",
            TriadType::T021D => "021D",
            TriadType::T021U => "021U",
            TriadType::T021C => "021C",
            TriadType::T111D => "111D",
            TriadType::T111U => "111U",
            TriadType::T030T => "030T",
            TriadType::T030C => "030C",
            TriadType::T201 => "201",
            TriadType::T120D => "120D",
            TriadType::T120U => "120U",
            TriadType::T120C => "120C",
            TriadType::T210 => "210",
            TriadType::T300 => "300",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_transitive(self) -> bool {
        self.transitive_slot().is_some()
    }

    /// Position within [`TriadType::TRANSITIVE`].
    pub fn transitive_slot(self) -> Option<usize> {
        match self {
            TriadType::T030T => Some(0),
            TriadType::T120D => Some(1),
            TriadType::T120U => Some(2),
            TriadType::T300 => Some(3),
            _ => None,
        }
    }

    /// Number of transitive triples carried by a triad of this class.
    pub fn transitive_triple_count(self) -> usize {
        match self {
            TriadType::T030T => 1,
            TriadType::T120D | TriadType::T120U => 2,
            TriadType::T300 => 6,
            _ => 0,
        }
    }

    /// Classes with at most one connected dyad never reach the enumerator.
    pub fn is_connected(self) -> bool {
        !matches!(self, TriadType::T003 | TriadType::T012 | TriadType::T102)
    }
}

impl fmt::Display for TriadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TriadType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TriadType::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown triad type `{s}`")))
    }
}

impl Serialize for TriadType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for TriadType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered transitive triple: edges source→mid, mid→sink and source→sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub source: NodeIndex,
    pub mid: NodeIndex,
    pub sink: NodeIndex,
    /// Signs of (source→mid, mid→sink, source→sink).
    pub signs: [Sign; 3],
}

impl Triple {
    pub fn negatives(&self) -> usize {
        self.signs.iter().filter(|s| s.is_negative()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triad {
    /// Sorted node indices.
    pub nodes: [NodeIndex; 3],
    pub triad_type: TriadType,
    /// Empty unless the class is transitive.
    pub triples: ArrayVec<Triple, 6>,
}

impl Triad {
    pub fn node_ids<'g>(&self, graph: &'g SignedDigraph) -> [&'g str; 3] {
        self.nodes.map(|v| graph.id(v))
    }
}

// Dyad bits for (v, u, w): v→u, u→v, v→w, w→v, u→w, w→u.
fn tricode(graph: &SignedDigraph, v: NodeIndex, u: NodeIndex, w: NodeIndex) -> usize {
    let probes = [(v, u), (u, v), (v, w), (w, v), (u, w), (w, u)];
    probes
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| graph.has_edge(a, b))
        .fold(0, |code, (bit, _)| code | (1 << bit))
}

#[rustfmt::skip]
const TRICODE_CLASS: [u8; 64] = [
    0, 1, 1, 2, 1, 3, 5, 7, 1, 5, 4, 6, 2, 7, 6, 10,
    1, 5, 3, 7, 4, 8, 8, 12, 5, 9, 8, 13, 6, 13, 11, 14,
    1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12, 13, 14,
    2, 6, 7, 10, 6, 11, 13, 14, 7, 13, 12, 14, 10, 14, 14, 15,
];

/// Class of the triad on three distinct node indices. Signs are ignored.
pub fn classify_indices(
    graph: &SignedDigraph,
    a: NodeIndex,
    b: NodeIndex,
    c: NodeIndex,
) -> TriadType {
    TriadType::ALL[TRICODE_CLASS[tricode(graph, a, b, c)] as usize]
}

/// Class of the triad on three distinct node ids.
pub fn classify_man(graph: &SignedDigraph, a: &str, b: &str, c: &str) -> Result<TriadType> {
    let (x, y, z) = (graph.index_of(a)?, graph.index_of(b)?, graph.index_of(c)?);
    if x == y || y == z || x == z {
        return Err(Error::InvalidArgument(format!(
            "triad nodes must be distinct, got ({a}, {b}, {c})"
        )));
    }
    Ok(classify_indices(graph, x, y, z))
}

fn orderings(nodes: [NodeIndex; 3]) -> [[NodeIndex; 3]; 6] {
    let [x, y, z] = nodes;
    [
        [x, y, z],
        [x, z, y],
        [y, x, z],
        [y, z, x],
        [z, x, y],
        [z, y, x],
    ]
}

fn collect_transitive(graph: &SignedDigraph, nodes: [NodeIndex; 3]) -> ArrayVec<Triple, 6> {
    let mut out = ArrayVec::new();
    for [s, m, k] in orderings(nodes) {
        if let (Some(s1), Some(s2), Some(s3)) =
            (graph.sign(s, m), graph.sign(m, k), graph.sign(s, k))
        {
            out.push(Triple {
                source: s,
                mid: m,
                sink: k,
                signs: [s1, s2, s3],
            });
        }
    }
    out
}

/// Transitive triples of a triad from one of the four transitive classes.
pub fn transitive_triples(graph: &SignedDigraph, triad: &Triad) -> Result<Vec<Triple>> {
    if !triad.triad_type.is_transitive() {
        return Err(Error::NotTransitive(triad.triad_type));
    }
    Ok(collect_transitive(graph, triad.nodes).to_vec())
}

fn make_triad(graph: &SignedDigraph, nodes: [NodeIndex; 3]) -> Triad {
    let triad_type = classify_indices(graph, nodes[0], nodes[1], nodes[2]);
    let triples = if triad_type.is_transitive() {
        collect_transitive(graph, nodes)
    } else {
        ArrayVec::new()
    };
    Triad {
        nodes,
        triad_type,
        triples,
    }
}

/// Per-worker scratch used to enumerate the triads whose smallest node is a
/// given pivot.
struct PivotScratch {
    stamp: Vec<usize>,
    pairs: Vec<(NodeIndex, NodeIndex)>,
}

impl PivotScratch {
    fn new(n: usize) -> Self {
        PivotScratch {
            stamp: vec![usize::MAX; n],
            pairs: Vec::new(),
        }
    }

    /// Fill `pairs` with every (b, c), a < b < c, such that {a, b, c} has at
    /// least two connected dyads; sorted.
    fn fill(&mut self, graph: &SignedDigraph, a: NodeIndex) {
        self.pairs.clear();
        let upper = {
            let nbrs = graph.neighbors(a);
            &nbrs[nbrs.partition_point(|&x| x <= a)..]
        };
        for &x in upper {
            self.stamp[x] = a;
        }
        for (i, &b) in upper.iter().enumerate() {
            for &c in &upper[i + 1..] {
                self.pairs.push((b, c));
            }
        }
        // a adjacent to x only, x adjacent to y
        for &x in upper {
            let nx = graph.neighbors(x);
            for &y in &nx[nx.partition_point(|&y| y <= a)..] {
                if y != x && self.stamp[y] != a {
                    self.pairs.push((x.min(y), x.max(y)));
                }
            }
        }
        self.pairs.sort_unstable();
    }
}

/// Lazily yields every connected triad (at least two connected dyads) once, in
/// lexicographic order of sorted node indices.
pub struct TriadIter<'g> {
    graph: &'g SignedDigraph,
    pivot: NodeIndex,
    cursor: usize,
    scratch: PivotScratch,
}

impl<'g> Iterator for TriadIter<'g> {
    type Item = Triad;

    fn next(&mut self) -> Option<Triad> {
        loop {
            if let Some(&(b, c)) = self.scratch.pairs.get(self.cursor) {
                self.cursor += 1;
                return Some(make_triad(self.graph, [self.pivot - 1, b, c]));
            }
            if self.pivot >= self.graph.node_count() {
                return None;
            }
            self.scratch.fill(self.graph, self.pivot);
            self.cursor = 0;
            self.pivot += 1;
        }
    }
}

pub fn triads(graph: &SignedDigraph) -> TriadIter<'_> {
    TriadIter {
        graph,
        pivot: 0,
        cursor: 0,
        scratch: PivotScratch::new(graph.node_count()),
    }
}

/// All connected triads, classified, in lexicographic order.
pub fn enumerate_triads(graph: &SignedDigraph) -> Vec<Triad> {
    (0..graph.node_count())
        .into_par_iter()
        .map_init(
            || PivotScratch::new(graph.node_count()),
            |scratch, a| {
                scratch.fill(graph, a);
                scratch
                    .pairs
                    .iter()
                    .map(|&(b, c)| make_triad(graph, [a, b, c]))
                    .collect::<Vec<_>>()
            },
        )
        .flatten_iter()
        .collect()
}

/// Parallel fold over all connected triads, partitioned by pivot node.
///
/// `fold` sees triads of one pivot in lexicographic order; partial results are
/// combined with `reduce`, which must be associative.
pub fn fold_triads<T, ID, F, R>(graph: &SignedDigraph, identity: ID, fold: F, reduce: R) -> T
where
    T: Send,
    ID: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &Triad) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    (0..graph.node_count())
        .into_par_iter()
        .map_init(
            || PivotScratch::new(graph.node_count()),
            |scratch, a| {
                scratch.fill(graph, a);
                let mut acc = identity();
                for &(b, c) in &scratch.pairs {
                    fold(&mut acc, &make_triad(graph, [a, b, c]));
                }
                acc
            },
        )
        .reduce(&identity, &reduce)
}

/// Number of connected triads, without materialising them.
pub fn count_triads(graph: &SignedDigraph) -> u64 {
    fold_triads(graph, || 0u64, |n, _| *n += 1, |a, b| a + b)
}

/// Counts per MAN class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusTable {
    counts: [u64; 16],
}

impl CensusTable {
    pub fn from_counts(counts: [u64; 16]) -> Self {
        CensusTable { counts }
    }

    pub fn get(&self, t: TriadType) -> u64 {
        self.counts[t.index()]
    }

    pub fn add(&mut self, t: TriadType, n: u64) {
        self.counts[t.index()] += n;
    }

    pub fn counts(&self) -> &[u64; 16] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriadType, u64)> + '_ {
        TriadType::ALL.into_iter().map(|t| (t, self.get(t)))
    }

    /// Sum over all 16 classes, null triads included; equals C(n, 3).
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum over the enumerated (connected) classes only.
    pub fn connected_total(&self) -> u64 {
        self.iter()
            .filter(|(t, _)| t.is_connected())
            .map(|(_, c)| c)
            .sum()
    }

    /// `triad_type,count` with 16 rows in census order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("triad_type,count\n");
        for (t, c) in self.iter() {
            out.push_str(&format!("{t},{c}\n"));
        }
        out
    }
}

impl Serialize for CensusTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(16))?;
        for (t, c) in self.iter() {
            map.serialize_entry(t.label(), &c)?;
        }
        map.end()
    }
}

pub fn choose3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) / 2 * (n - 2) / 3
    }
}

fn union_size(a: &[NodeIndex], b: &[NodeIndex]) -> usize {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - shared
}

/// Holland–Leinhardt triad census.
///
/// Connected classes come from enumeration; 012 and 102 are counted per dyad
/// from the nodes tied to neither endpoint, and 003 is the remainder of C(n, 3).
pub fn census(graph: &SignedDigraph) -> CensusTable {
    let n = graph.node_count();
    let mut table = fold_triads(
        graph,
        CensusTable::default,
        |acc, triad| acc.add(triad.triad_type, 1),
        |mut a, b| {
            for (x, y) in a.counts.iter_mut().zip(b.counts) {
                *x += y;
            }
            a
        },
    );
    let (single, mutual) = (0..n)
        .into_par_iter()
        .map(|u| {
            let nu = graph.neighbors(u);
            let mut acc = (0u64, 0u64);
            for &v in &nu[nu.partition_point(|&v| v <= u)..] {
                // both neighbour lists contain the other endpoint
                let isolated = (n - union_size(nu, graph.neighbors(v))) as u64;
                if graph.has_edge(u, v) && graph.has_edge(v, u) {
                    acc.1 += isolated;
                } else {
                    acc.0 += isolated;
                }
            }
            acc
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    table.add(TriadType::T012, single);
    table.add(TriadType::T102, mutual);
    let rest = table.total();
    table.add(TriadType::T003, choose3(n as u64) - rest);
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::Positive;

    fn digraph(edges: &[(&str, &str)]) -> SignedDigraph {
        SignedDigraph::from_edges(edges.iter().map(|&(u, v)| (u, v, Positive))).unwrap()
    }

    fn mutual_clique(n: usize) -> SignedDigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    edges.push((u, v, Positive));
                }
            }
        }
        SignedDigraph::from_index_edges(n, &edges).unwrap()
    }

    #[test]
    fn classify_examples() {
        let g = digraph(&[("a", "b"), ("a", "c"), ("b", "c")]);
        assert_eq!(classify_man(&g, "a", "b", "c").unwrap(), TriadType::T030T);
        let cyc = digraph(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(classify_man(&cyc, "a", "b", "c").unwrap(), TriadType::T030C);
        let full = mutual_clique(3);
        assert_eq!(classify_man(&full, "0", "1", "2").unwrap(), TriadType::T300);
    }

    #[test]
    fn classify_orientation_letters() {
        let down = digraph(&[("a", "b"), ("b", "a"), ("c", "a"), ("c", "b")]);
        assert_eq!(
            classify_man(&down, "a", "b", "c").unwrap(),
            TriadType::T120D
        );
        let up = digraph(&[("a", "b"), ("b", "a"), ("a", "c"), ("b", "c")]);
        assert_eq!(classify_man(&up, "a", "b", "c").unwrap(), TriadType::T120U);
        let out_star = digraph(&[("a", "b"), ("a", "c")]);
        assert_eq!(
            classify_man(&out_star, "a", "b", "c").unwrap(),
            TriadType::T021D
        );
        let in_star = digraph(&[("b", "a"), ("c", "a")]);
        assert_eq!(
            classify_man(&in_star, "a", "b", "c").unwrap(),
            TriadType::T021U
        );
        let m_in = digraph(&[("a", "b"), ("b", "a"), ("c", "b")]);
        assert_eq!(
            classify_man(&m_in, "a", "b", "c").unwrap(),
            TriadType::T111D
        );
        let m_out = digraph(&[("a", "b"), ("b", "a"), ("b", "c")]);
        assert_eq!(
            classify_man(&m_out, "a", "b", "c").unwrap(),
            TriadType::T111U
        );
    }

    #[test]
    fn classify_errors() {
        let g = digraph(&[("a", "b"), ("b", "c")]);
        assert!(matches!(
            classify_man(&g, "a", "b", "q"),
            Err(Error::UnknownNode(_))
        ));
        assert!(matches!(
            classify_man(&g, "a", "a", "b"),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn clique_of_four() {
        let g = mutual_clique(4);
        let all = enumerate_triads(&g);
        assert_eq!(all.len(), 4);
        assert!(all
            .iter()
            .all(|t| t.triad_type == TriadType::T300 && t.triples.len() == 6));
        assert_eq!(triads(&g).collect::<Vec<_>>(), all);
    }

    #[test]
    fn out_star() {
        let g = digraph(&[("a", "b"), ("a", "c"), ("a", "d")]);
        let all = enumerate_triads(&g);
        assert_eq!(all.len(), 3);
        assert!(all
            .iter()
            .all(|t| t.triad_type == TriadType::T021D && t.triples.is_empty()));
    }

    #[test]
    fn lexicographic_order() {
        let g = mutual_clique(6);
        let nodes: Vec<_> = triads(&g).map(|t| t.nodes).collect();
        let mut sorted = nodes.clone();
        sorted.sort();
        assert_eq!(nodes, sorted);
        assert_eq!(nodes.len(), 20);
    }

    #[test]
    fn census_examples() {
        let empty =
            SignedDigraph::with_nodes(["a", "b", "c", "d", "e"], Vec::<(&str, &str, Sign)>::new())
                .unwrap();
        let c = census(&empty);
        assert_eq!(c.get(TriadType::T003), 10);
        assert_eq!(c.total(), 10);

        let dyad =
            SignedDigraph::with_nodes(["c"], [("a", "b", Positive), ("b", "a", Positive)]).unwrap();
        let c = census(&dyad);
        assert_eq!(c.get(TriadType::T102), 1);
        assert_eq!(c.total(), 1);

        for n in [3u64, 5, 8] {
            let c = census(&mutual_clique(n as usize));
            assert_eq!(c.get(TriadType::T300), choose3(n));
            assert_eq!(c.total(), choose3(n));
        }
    }

    #[test]
    fn census_csv_layout() {
        let csv = census(&mutual_clique(4)).to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "triad_type,count");
        assert_eq!(lines[1], "003,0");
        assert_eq!(lines[16], "300,4");
    }

    #[test]
    fn triples_030t() {
        let g = digraph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let t = &enumerate_triads(&g)[0];
        let triples = transitive_triples(&g, t).unwrap();
        assert_eq!(triples.len(), 1);
        assert_eq!(
            (triples[0].source, triples[0].mid, triples[0].sink),
            (0, 1, 2)
        );
    }

    #[test]
    fn triples_120d_exhaustive() {
        // mutual a<->b, c->a, c->b
        let g = digraph(&[("a", "b"), ("b", "a"), ("c", "a"), ("c", "b")]);
        let t = &enumerate_triads(&g)[0];
        let got: Vec<_> = transitive_triples(&g, t)
            .unwrap()
            .iter()
            .map(|x| [x.source, x.mid, x.sink])
            .collect();
        // brute force over the six orderings
        let mut expected = Vec::new();
        for p in orderings([0, 1, 2]) {
            if g.has_edge(p[0], p[1]) && g.has_edge(p[1], p[2]) && g.has_edge(p[0], p[2]) {
                expected.push(p);
            }
        }
        assert_eq!(expected, vec![[2, 0, 1], [2, 1, 0]]);
        assert_eq!(got, expected);
    }

    #[test]
    fn triples_300_and_contract() {
        let g = mutual_clique(3);
        let t = &enumerate_triads(&g)[0];
        assert_eq!(transitive_triples(&g, t).unwrap().len(), 6);

        let cyc = digraph(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let t = &enumerate_triads(&cyc)[0];
        assert!(matches!(
            transitive_triples(&cyc, t),
            Err(Error::NotTransitive(TriadType::T030C))
        ));
    }

    #[test]
    fn labels_round_trip() {
        for t in TriadType::ALL {
            assert_eq!(t.label().parse::<TriadType>().unwrap(), t);
        }
        assert_eq!(
            TriadType::TRANSITIVE.map(|t| t.transitive_triple_count()),
            [1, 2, 2, 6]
        );
    }
}

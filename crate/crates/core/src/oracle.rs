//! Brute-force reference computations for small graphs.
//!
//! Everything here works from direct edge lookups over all C(n, 3) node
//! triples and never touches the enumerator, the tricode table or the balance
//! tallies, so it can be used to check them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::balance::{self, BalanceMode};
use crate::census::{self, CensusTable, TriadType};
use crate::error::{Error, Result};
use crate::graph::{project_undirected, NodeIndex, Sign, SignedDigraph};
use crate::signstats::{self, CompositionBasis, CompositionTable};

pub const MAX_NODES: usize = 200;

/// Tolerance used when comparing floating ratios against the fast path.
pub const RATIO_TOLERANCE: f64 = 1e-12;

/// Random signed digraph from a ChaCha8 stream seeded with `seed`.
///
/// Ordered pairs are visited row-major (`u` outer, `v` inner, `u != v`); each
/// pair consumes two uniform `f64` draws in `[0, 1)`: the first decides the
/// edge (`< edge_prob`), the second its sign (`< neg_prob` means negative).
pub fn random_signed_digraph(
    n: usize,
    edge_prob: f64,
    neg_prob: f64,
    seed: u64,
) -> Result<SignedDigraph> {
    for (name, p) in [("edge_prob", edge_prob), ("neg_prob", neg_prob)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "{name} must lie in [0, 1], got {p}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let present: f64 = rng.gen();
            let negative: f64 = rng.gen();
            if present < edge_prob {
                let sign = if negative < neg_prob {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                edges.push((u, v, sign));
            }
        }
    }
    SignedDigraph::from_index_edges(n, &edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dyad {
    Null,
    Mutual,
    /// Single edge from the first node to the second.
    Forward,
    Backward,
}

fn dyad(graph: &SignedDigraph, x: NodeIndex, y: NodeIndex) -> Dyad {
    match (graph.sign(x, y).is_some(), graph.sign(y, x).is_some()) {
        (true, true) => Dyad::Mutual,
        (true, false) => Dyad::Forward,
        (false, true) => Dyad::Backward,
        (false, false) => Dyad::Null,
    }
}

/// MAN class from dyad counts plus the orientation of asymmetric edges.
fn classify_by_dyads(graph: &SignedDigraph, nodes: [NodeIndex; 3]) -> TriadType {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let states = pairs.map(|(i, j)| dyad(graph, nodes[i], nodes[j]));
    let mutual = states.iter().filter(|&&d| d == Dyad::Mutual).count();
    let null = states.iter().filter(|&&d| d == Dyad::Null).count();
    let asym = 3 - mutual - null;

    // out- and in-degree of each node counting asymmetric edges only
    let mut asym_out = [0usize; 3];
    let mut asym_in = [0usize; 3];
    for (&(i, j), state) in pairs.iter().zip(&states) {
        match state {
            Dyad::Forward => {
                asym_out[i] += 1;
                asym_in[j] += 1;
            }
            Dyad::Backward => {
                asym_out[j] += 1;
                asym_in[i] += 1;
            }
            _ => {}
        }
    }
    let any_sends_two = asym_out.contains(&2);
    let any_gets_two = asym_in.contains(&2);

    match (mutual, asym, null) {
        (0, 0, 3) => TriadType::T003,
        (0, 1, 2) => TriadType::T012,
        (1, 0, 2) => TriadType::T102,
        (0, 2, 1) => {
            if any_sends_two {
                TriadType::T021D
            } else if any_gets_two {
                TriadType::T021U
            } else {
                TriadType::T021C
            }
        }
        (1, 1, 1) => {
            // the asymmetric edge touches one end of the mutual dyad; "down"
            // when that end receives it
            let m = pairs[states.iter().position(|&d| d == Dyad::Mutual).unwrap()];
            let receiver_in_mutual = (0..3).any(|k| asym_in[k] == 1 && (k == m.0 || k == m.1));
            if receiver_in_mutual {
                TriadType::T111D
            } else {
                TriadType::T111U
            }
        }
        (0, 3, 0) => {
            if any_sends_two {
                TriadType::T030T
            } else {
                TriadType::T030C
            }
        }
        (2, 0, 1) => TriadType::T201,
        (1, 2, 0) => {
            if any_sends_two {
                TriadType::T120D
            } else if any_gets_two {
                TriadType::T120U
            } else {
                TriadType::T120C
            }
        }
        (2, 1, 0) => TriadType::T210,
        (3, 0, 0) => TriadType::T300,
        _ => unreachable!("three dyads always split into M + A + N = 3"),
    }
}

/// A transitive triple as `(source, mid, sink, signs)`.
pub type OracleTriple = (NodeIndex, NodeIndex, NodeIndex, [Sign; 3]);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleTriad {
    pub nodes: [NodeIndex; 3],
    pub triad_type: TriadType,
    /// Filled only for the four transitive classes.
    pub triples: Vec<OracleTriple>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct OracleRatios {
    pub per_type: [Option<f64>; 4],
    pub per_type_counts: [u64; 4],
    pub type_mean: Option<f64>,
    pub triad_mean: Option<f64>,
    pub nonpartial: Option<f64>,
    pub nonpartial_balanced: u64,
    pub nonpartial_imbalanced: u64,
    pub undirected: Option<f64>,
    pub undirected_balanced: u64,
    pub undirected_imbalanced: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub census: CensusTable,
    pub triads: Vec<OracleTriad>,
    pub ratios: OracleRatios,
    pub composition_directed: CompositionTable,
    pub composition_undirected: CompositionTable,
}

/// Sign of the undirected realisation of {x, y}, straight from the rule.
fn projected_sign(graph: &SignedDigraph, x: NodeIndex, y: NodeIndex) -> Option<Sign> {
    match (graph.sign(x, y), graph.sign(y, x)) {
        (Some(a), Some(b)) if a == b => Some(a),
        (Some(_), Some(_)) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

fn negatives(signs: &[Sign]) -> usize {
    signs.iter().filter(|&&s| s == Sign::Negative).count()
}

/// Exhaustive O(n³) evaluation of every census and balance figure.
pub fn brute_force(graph: &SignedDigraph) -> Result<OracleResult> {
    let n = graph.node_count();
    if n > MAX_NODES {
        return Err(Error::OracleTooLarge(n));
    }
    let mut census = [0u64; 16];
    let mut triads = Vec::new();
    let mut directed_neg = [0u64; 4];
    let mut undirected_neg = [0u64; 4];

    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let nodes = [a, b, c];
                let t = classify_by_dyads(graph, nodes);
                census[t.index()] += 1;

                let signs = [
                    projected_sign(graph, a, b),
                    projected_sign(graph, b, c),
                    projected_sign(graph, a, c),
                ];
                if let [Some(x), Some(y), Some(z)] = signs {
                    undirected_neg[negatives(&[x, y, z])] += 1;
                }

                let connected = [(a, b), (a, c), (b, c)]
                    .iter()
                    .filter(|&&(x, y)| dyad(graph, x, y) != Dyad::Null)
                    .count();
                if connected < 2 {
                    continue;
                }
                let mut triples = Vec::new();
                if matches!(
                    t,
                    TriadType::T030T | TriadType::T120D | TriadType::T120U | TriadType::T300
                ) {
                    for (s, m, k) in [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        if let (Some(x), Some(y), Some(z)) =
                            (graph.sign(s, m), graph.sign(m, k), graph.sign(s, k))
                        {
                            directed_neg[negatives(&[x, y, z])] += 1;
                            triples.push((s, m, k, [x, y, z]));
                        }
                    }
                }
                triads.push(OracleTriad {
                    nodes,
                    triad_type: t,
                    triples,
                });
            }
        }
    }

    let transitive: Vec<&OracleTriad> = triads.iter().filter(|t| !t.triples.is_empty()).collect();
    let mut ratios = OracleRatios::default();
    for (slot, ty) in [
        TriadType::T030T,
        TriadType::T120D,
        TriadType::T120U,
        TriadType::T300,
    ]
    .into_iter()
    .enumerate()
    {
        let of_type: Vec<&&OracleTriad> =
            transitive.iter().filter(|t| t.triad_type == ty).collect();
        let total: usize = of_type.iter().map(|t| t.triples.len()).sum();
        let good: usize = of_type
            .iter()
            .map(|t| {
                t.triples
                    .iter()
                    .filter(|x| negatives(&x.3).is_multiple_of(2))
                    .count()
            })
            .sum();
        ratios.per_type_counts[slot] = of_type.len() as u64;
        ratios.per_type[slot] = (total > 0).then(|| good as f64 / total as f64);
    }
    let present: Vec<f64> = ratios.per_type.iter().flatten().copied().collect();
    ratios.type_mean =
        (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64);

    if !transitive.is_empty() {
        let mut ratio_sum = 0.0;
        let mut complete = 0u64;
        for t in &transitive {
            let good = t
                .triples
                .iter()
                .filter(|x| negatives(&x.3).is_multiple_of(2))
                .count();
            ratio_sum += good as f64 / t.triples.len() as f64;
            if good == t.triples.len() {
                complete += 1;
            }
        }
        let count = transitive.len() as u64;
        ratios.triad_mean = Some(ratio_sum / count as f64);
        ratios.nonpartial = Some(complete as f64 / count as f64);
        ratios.nonpartial_balanced = complete;
        ratios.nonpartial_imbalanced = count - complete;
    }

    let triangles: u64 = undirected_neg.iter().sum();
    ratios.undirected_balanced = undirected_neg[0] + undirected_neg[2];
    ratios.undirected_imbalanced = triangles - ratios.undirected_balanced;
    ratios.undirected =
        (triangles > 0).then(|| ratios.undirected_balanced as f64 / triangles as f64);

    Ok(OracleResult {
        census: CensusTable::from_counts(census),
        triads,
        ratios,
        composition_directed: CompositionTable::from_negative_counts(
            CompositionBasis::DirectedTriples,
            directed_neg,
        ),
        composition_undirected: CompositionTable::from_negative_counts(
            CompositionBasis::UndirectedTriangles,
            undirected_neg,
        ),
    })
}

fn ratio_matches(fast: Option<f64>, oracle: Option<f64>) -> bool {
    match (fast, oracle) {
        (Some(a), Some(b)) => (a - b).abs() <= RATIO_TOLERANCE,
        (None, None) => true,
        _ => false,
    }
}

/// Run the fast path and the oracle on `graph`; describe every field that
/// disagrees. An empty list means full agreement.
pub fn check(graph: &SignedDigraph) -> Result<Vec<String>> {
    let oracle = brute_force(graph)?;
    let mut diffs = Vec::new();

    let fast_census = census::census(graph);
    if fast_census != oracle.census {
        diffs.push(format!(
            "census: fast {:?} vs oracle {:?}",
            fast_census.counts(),
            oracle.census.counts()
        ));
    }

    let fast_triads = census::enumerate_triads(graph);
    if fast_triads.len() != oracle.triads.len() {
        diffs.push(format!(
            "triad count: fast {} vs oracle {}",
            fast_triads.len(),
            oracle.triads.len()
        ));
    }
    for (f, o) in fast_triads.iter().zip(&oracle.triads) {
        let mut fast_triples: Vec<OracleTriple> = f
            .triples
            .iter()
            .map(|t| (t.source, t.mid, t.sink, t.signs))
            .collect();
        let mut oracle_triples = o.triples.clone();
        fast_triples.sort();
        oracle_triples.sort();
        if f.nodes != o.nodes || f.triad_type != o.triad_type || fast_triples != oracle_triples {
            diffs.push(format!(
                "triad {:?}/{}: oracle {:?}/{}",
                f.nodes, f.triad_type, o.nodes, o.triad_type
            ));
        }
    }

    let tally = balance::BalanceTally::of_graph(graph);
    let types = tally.type_balance();
    for (slot, tb) in types.iter().enumerate() {
        if tb.triad_count != oracle.ratios.per_type_counts[slot]
            || !ratio_matches(tb.ratio, oracle.ratios.per_type[slot])
        {
            diffs.push(format!(
                "type {}: fast ({}, {:?}) vs oracle ({}, {:?})",
                tb.triad_type,
                tb.triad_count,
                tb.ratio,
                oracle.ratios.per_type_counts[slot],
                oracle.ratios.per_type[slot]
            ));
        }
    }
    let type_mean = tally.overall(BalanceMode::TypeMean).ok();
    if !ratio_matches(type_mean, oracle.ratios.type_mean) {
        diffs.push(format!(
            "type-mean: fast {type_mean:?} vs oracle {:?}",
            oracle.ratios.type_mean
        ));
    }
    let triad_mean = tally.overall(BalanceMode::TriadMean).ok();
    if !ratio_matches(triad_mean, oracle.ratios.triad_mean) {
        diffs.push(format!(
            "triad-mean: fast {triad_mean:?} vs oracle {:?}",
            oracle.ratios.triad_mean
        ));
    }
    let np = tally.nonpartial().ok();
    let np_counts = np.map(|x| (x.balanced, x.imbalanced)).unwrap_or((0, 0));
    if !ratio_matches(np.map(|x| x.ratio), oracle.ratios.nonpartial)
        || np_counts
            != (
                oracle.ratios.nonpartial_balanced,
                oracle.ratios.nonpartial_imbalanced,
            )
    {
        diffs.push(format!(
            "non-partial: fast {np:?} vs oracle {:?}",
            oracle.ratios.nonpartial
        ));
    }

    let projection = project_undirected(graph);
    let und = balance::undirected_balance(&projection);
    if !ratio_matches(und.ratio, oracle.ratios.undirected)
        || (und.balanced, und.imbalanced)
            != (
                oracle.ratios.undirected_balanced,
                oracle.ratios.undirected_imbalanced,
            )
    {
        diffs.push(format!(
            "undirected: fast {und:?} vs oracle {:?}",
            oracle.ratios.undirected
        ));
    }

    let cd = signstats::composition_from_tally(&tally);
    if cd.counts != oracle.composition_directed.counts {
        diffs.push(format!(
            "directed composition: fast {:?} vs oracle {:?}",
            cd.counts, oracle.composition_directed.counts
        ));
    }
    let cu = signstats::composition_undirected(&projection);
    if cu.counts != oracle.composition_undirected.counts {
        diffs.push(format!(
            "undirected composition: fast {:?} vs oracle {:?}",
            cu.counts, oracle.composition_undirected.counts
        ));
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph() {
        let g = SignedDigraph::with_nodes(["a", "b", "c", "d"], Vec::<(&str, &str, Sign)>::new())
            .unwrap();
        let r = brute_force(&g).unwrap();
        assert_eq!(r.census.get(TriadType::T003), 4);
        assert_eq!(r.census.total(), 4);
        assert!(r.triads.is_empty());
        assert_eq!(r.ratios.type_mean, None);
    }

    #[test]
    fn single_positive_030t() {
        let g = SignedDigraph::from_edges([
            ("a", "b", Sign::Positive),
            ("b", "c", Sign::Positive),
            ("a", "c", Sign::Positive),
        ])
        .unwrap();
        let r = brute_force(&g).unwrap().ratios;
        assert_eq!(r.type_mean, Some(1.0));
        assert_eq!(r.triad_mean, Some(1.0));
        assert_eq!(r.nonpartial, Some(1.0));
        assert_eq!(r.undirected, Some(1.0));
    }

    #[test]
    fn refuses_large_graphs() {
        let g = SignedDigraph::from_index_edges(MAX_NODES + 1, &[]).unwrap();
        assert!(matches!(brute_force(&g), Err(Error::OracleTooLarge(201))));
    }

    #[test]
    fn random_generator_contract() {
        assert_eq!(
            random_signed_digraph(10, 0.0, 0.5, 3).unwrap().edge_count(),
            0
        );
        let full = random_signed_digraph(6, 1.0, 0.0, 3).unwrap();
        assert_eq!(full.edge_count(), 30);
        assert!(full.edges().all(|(_, _, s)| s == Sign::Positive));
        let a = random_signed_digraph(6, 0.5, 0.5, 1).unwrap();
        let b = random_signed_digraph(6, 0.5, 0.5, 1).unwrap();
        assert_eq!(a, b);
        assert!(random_signed_digraph(3, 1.5, 0.0, 0).is_err());
    }

    #[test]
    fn seed_seven_agrees() {
        let g = random_signed_digraph(20, 0.3, 0.3, 7).unwrap();
        assert_eq!(check(&g).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn dyad_rule_matches_tricode_table_on_all_64_patterns() {
        let pairs = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        for code in 0u32..64 {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| code & (1 << bit) != 0)
                .map(|(_, &(u, v))| (u, v, Sign::Positive))
                .collect();
            let g = SignedDigraph::from_index_edges(3, &edges).unwrap();
            assert_eq!(
                classify_by_dyads(&g, [0, 1, 2]),
                census::classify_indices(&g, 0, 1, 2),
                "pattern {code:06b}"
            );
        }
    }
}

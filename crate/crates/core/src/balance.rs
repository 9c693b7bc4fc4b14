//! Partial, non-partial and undirected balance.
//!
//! A transitive triple is balanced when it carries an even number of negative
//! edges. A triad's balance is the fraction of its transitive triples that are
//! balanced; graph-level figures aggregate those per type, per triad, or in
//! the all-or-nothing (non-partial) sense.

use std::ops::AddAssign;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{fold_triads, Triad, TriadType, Triple};
use crate::error::{Error, Result};
use crate::graph::{SignedDigraph, SignedGraph};

pub fn triple_is_balanced(triple: &Triple) -> bool {
    triple.negatives().is_multiple_of(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriadClass {
    CompletelyBalanced,
    PartiallyBalanced,
    CompletelyImbalanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriadBalance {
    pub triad: Triad,
    pub balanced_triples: usize,
    pub total_triples: usize,
    pub ratio: f64,
    pub classification: TriadClass,
}

fn classify_counts(balanced: usize, total: usize) -> TriadClass {
    if balanced == total {
        TriadClass::CompletelyBalanced
    } else if balanced == 0 {
        TriadClass::CompletelyImbalanced
    } else {
        TriadClass::PartiallyBalanced
    }
}

pub fn triad_balance(_graph: &SignedDigraph, triad: &Triad) -> Result<TriadBalance> {
    if !triad.triad_type.is_transitive() {
        return Err(Error::NotTransitive(triad.triad_type));
    }
    let total = triad.triples.len();
    let balanced = triad
        .triples
        .iter()
        .filter(|t| triple_is_balanced(t))
        .count();
    Ok(TriadBalance {
        triad: triad.clone(),
        balanced_triples: balanced,
        total_triples: total,
        ratio: balanced as f64 / total as f64,
        classification: classify_counts(balanced, total),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeBalance {
    #[serde(rename = "type")]
    pub triad_type: TriadType,
    #[serde(rename = "count")]
    pub triad_count: u64,
    /// `None` when no triad of this type exists.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceMode {
    /// Unweighted mean of the per-type ratios over the types present.
    #[default]
    TypeMean,
    /// Mean of the per-triad ratios over all transitive triads.
    TriadMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NonPartialBalance {
    pub ratio: f64,
    pub balanced: u64,
    pub imbalanced: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UndirectedBalance {
    pub triangles: u64,
    pub balanced: u64,
    pub imbalanced: u64,
    /// `None` when the projection has no triangle.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassificationCounts {
    pub completely_balanced: u64,
    pub partially_balanced: u64,
    pub completely_imbalanced: u64,
}

impl ClassificationCounts {
    pub fn total(&self) -> u64 {
        self.completely_balanced + self.partially_balanced + self.completely_imbalanced
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct TypeTally {
    triads: u64,
    balanced_triples: u64,
    total_triples: u64,
}

/// Integer counters from one pass over the transitive triads. Every balance
/// figure for the digraph derives from these; merging is plain addition, so
/// any partitioning of the triads gives the same result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BalanceTally {
    per_type: [TypeTally; 4],
    // Σ 6·(per-triad ratio); exact because triple counts divide 6
    scaled_ratio_sum: u64,
    classes: ClassificationCounts,
    // triples by number of negative edges
    negatives: [u64; 4],
}

impl AddAssign for BalanceTally {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.per_type.iter_mut().zip(rhs.per_type) {
            a.triads += b.triads;
            a.balanced_triples += b.balanced_triples;
            a.total_triples += b.total_triples;
        }
        self.scaled_ratio_sum += rhs.scaled_ratio_sum;
        self.classes.completely_balanced += rhs.classes.completely_balanced;
        self.classes.partially_balanced += rhs.classes.partially_balanced;
        self.classes.completely_imbalanced += rhs.classes.completely_imbalanced;
        for (a, b) in self.negatives.iter_mut().zip(rhs.negatives) {
            *a += b;
        }
    }
}

impl BalanceTally {
    pub fn record(&mut self, triad: &Triad) {
        let Some(slot) = triad.triad_type.transitive_slot() else {
            return;
        };
        let total = triad.triples.len();
        let mut balanced = 0;
        for t in &triad.triples {
            let neg = t.negatives();
            self.negatives[neg] += 1;
            if neg % 2 == 0 {
                balanced += 1;
            }
        }
        let tally = &mut self.per_type[slot];
        tally.triads += 1;
        tally.balanced_triples += balanced as u64;
        tally.total_triples += total as u64;
        self.scaled_ratio_sum += (balanced * (6 / total)) as u64;
        match classify_counts(balanced, total) {
            TriadClass::CompletelyBalanced => self.classes.completely_balanced += 1,
            TriadClass::PartiallyBalanced => self.classes.partially_balanced += 1,
            TriadClass::CompletelyImbalanced => self.classes.completely_imbalanced += 1,
        }
    }

    /// Tally every transitive triad of `graph` (parallel over pivot nodes).
    pub fn of_graph(graph: &SignedDigraph) -> Self {
        fold_triads(
            graph,
            BalanceTally::default,
            |acc, triad| acc.record(triad),
            |mut a, b| {
                a += b;
                a
            },
        )
    }

    pub fn transitive_triads(&self) -> u64 {
        self.per_type.iter().map(|t| t.triads).sum()
    }

    pub fn total_triples(&self) -> u64 {
        self.per_type.iter().map(|t| t.total_triples).sum()
    }

    pub fn balanced_triples(&self) -> u64 {
        self.per_type.iter().map(|t| t.balanced_triples).sum()
    }

    /// Triple counts keyed by number of negative edges (0..=3).
    pub fn negative_counts(&self) -> [u64; 4] {
        self.negatives
    }

    pub fn classification(&self) -> ClassificationCounts {
        self.classes
    }

    pub fn type_balance(&self) -> [TypeBalance; 4] {
        std::array::from_fn(|slot| {
            let t = self.per_type[slot];
            TypeBalance {
                triad_type: TriadType::TRANSITIVE[slot],
                triad_count: t.triads,
                ratio: (t.total_triples > 0)
                    .then(|| t.balanced_triples as f64 / t.total_triples as f64),
            }
        })
    }

    pub fn type_mean(&self) -> Result<f64> {
        let ratios = self.type_balance().map(|t| t.ratio);
        type_mean(&ratios).ok_or(Error::NoTransitiveTriads)
    }

    pub fn triad_mean(&self) -> Result<f64> {
        match self.transitive_triads() {
            0 => Err(Error::NoTransitiveTriads),
            n => Ok(self.scaled_ratio_sum as f64 / (6 * n) as f64),
        }
    }

    pub fn overall(&self, mode: BalanceMode) -> Result<f64> {
        match mode {
            BalanceMode::TypeMean => self.type_mean(),
            BalanceMode::TriadMean => self.triad_mean(),
        }
    }

    pub fn nonpartial(&self) -> Result<NonPartialBalance> {
        let total = self.transitive_triads();
        if total == 0 {
            return Err(Error::NoTransitiveTriads);
        }
        let balanced = self.classes.completely_balanced;
        Ok(NonPartialBalance {
            ratio: balanced as f64 / total as f64,
            balanced,
            imbalanced: total - balanced,
        })
    }
}

/// Unweighted mean over the types that are present (`Some`).
pub fn type_mean(ratios: &[Option<f64>]) -> Option<f64> {
    let present: Vec<f64> = ratios.iter().flatten().copied().collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

pub fn type_balance(graph: &SignedDigraph) -> [TypeBalance; 4] {
    BalanceTally::of_graph(graph).type_balance()
}

pub fn overall_balance(graph: &SignedDigraph, mode: BalanceMode) -> Result<f64> {
    BalanceTally::of_graph(graph).overall(mode)
}

pub fn nonpartial_balance(graph: &SignedDigraph) -> Result<NonPartialBalance> {
    BalanceTally::of_graph(graph).nonpartial()
}

/// Triangle counts of an undirected signed graph keyed by number of negative
/// edges (0..=3).
pub fn triangle_negative_counts(graph: &SignedGraph) -> [u64; 4] {
    (0..graph.node_count())
        .into_par_iter()
        .map(|a| {
            let mut counts = [0u64; 4];
            for (_, signs) in graph.triangles_from(a) {
                counts[signs.iter().filter(|s| s.is_negative()).count()] += 1;
            }
            counts
        })
        .reduce(
            || [0; 4],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn undirected_from_counts(counts: [u64; 4]) -> UndirectedBalance {
    let triangles: u64 = counts.iter().sum();
    let balanced = counts[0] + counts[2];
    UndirectedBalance {
        triangles,
        balanced,
        imbalanced: triangles - balanced,
        ratio: (triangles > 0).then(|| balanced as f64 / triangles as f64),
    }
}

/// Balance of every closed triangle by the sign product of its edges.
pub fn undirected_balance(graph: &SignedGraph) -> UndirectedBalance {
    undirected_from_counts(triangle_negative_counts(graph))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub per_type: [TypeBalance; 4],
    pub overall_type_mean: f64,
    pub overall_triad_mean: f64,
    pub balance_mode: BalanceMode,
    /// The figure selected by `balance_mode`.
    pub overall: f64,
    pub nonpartial: NonPartialBalance,
    pub classification_counts: ClassificationCounts,
    pub undirected: Option<UndirectedBalance>,
}

impl BalanceReport {
    pub fn from_tally(
        tally: &BalanceTally,
        mode: BalanceMode,
        undirected: Option<UndirectedBalance>,
    ) -> Result<Self> {
        let overall_type_mean = tally.type_mean()?;
        let overall_triad_mean = tally.triad_mean()?;
        Ok(BalanceReport {
            per_type: tally.type_balance(),
            overall_type_mean,
            overall_triad_mean,
            balance_mode: mode,
            overall: match mode {
                BalanceMode::TypeMean => overall_type_mean,
                BalanceMode::TriadMean => overall_triad_mean,
            },
            nonpartial: tally.nonpartial()?,
            classification_counts: tally.classification(),
            undirected,
        })
    }

    pub fn transitive_triads(&self) -> u64 {
        self.classification_counts.total()
    }
}

/// Full report for `graph`; `projection` adds the undirected figures.
pub fn balance_report(
    graph: &SignedDigraph,
    mode: BalanceMode,
    projection: Option<&SignedGraph>,
) -> Result<BalanceReport> {
    let tally = BalanceTally::of_graph(graph);
    BalanceReport::from_tally(&tally, mode, projection.map(undirected_balance))
}

//! Report formatting: two-decimal CSV views and comparison documents.

use serde::Serialize;

use crate::balance::{BalanceReport, ClassificationCounts, NonPartialBalance, UndirectedBalance};
use crate::signstats::CompositionTable;

/// Round to two decimals, ties to even on the scaled value.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round_ties_even() / 100.0
}

pub fn round2_str(x: f64) -> String {
    format!("{:.2}", round2(x))
}

fn opt2(x: Option<f64>) -> String {
    x.map(round2_str).unwrap_or_else(|| "NA".to_string())
}

/// Per-type ratios and counts plus the overall row, two decimals.
pub fn balance_csv(report: &BalanceReport) -> String {
    let mut out = String::from("type,ratio,count\n");
    for t in &report.per_type {
        out.push_str(&format!(
            "{},{},{}\n",
            t.triad_type,
            opt2(t.ratio),
            t.triad_count
        ));
    }
    out.push_str(&format!(
        "average,{},{}\n",
        round2_str(report.overall),
        report.transitive_triads()
    ));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSummary {
    pub ratio: f64,
    pub classification_counts: ClassificationCounts,
}

/// Directed (partial and non-partial) against undirected balance, with the
/// structural differences between the two realisations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub network: String,
    pub directed_partial: PartialSummary,
    pub directed_nonpartial: NonPartialBalance,
    pub undirected: UndirectedBalance,
    pub composition_directed: CompositionTable,
    pub composition_undirected: CompositionTable,
    pub identical_composition: bool,
    /// `"directed = undirected"` or `"directed != undirected"`.
    pub verdict: String,
    /// Reciprocal pairs dropped by the projection because their signs differ.
    pub cancelled_edges: Vec<[String; 2]>,
    /// Triangles of the projection that are not transitive triads.
    pub undirected_only_triangles: Vec<[String; 3]>,
    /// Transitive triads that do not close a triangle in the projection.
    pub directed_only_triads: Vec<[String; 3]>,
}

impl ComparisonReport {
    pub const CSV_HEADER: &'static str =
        "network,partial_br,partial_complete,partial_partial,partial_imbalanced,\
nonpartial_br,nonpartial_bt,nonpartial_it,undirected_br,undirected_bt,undirected_it";

    pub fn to_csv(&self) -> String {
        let c = &self.directed_partial.classification_counts;
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{},{}\n",
            Self::CSV_HEADER,
            self.network,
            round2_str(self.directed_partial.ratio),
            c.completely_balanced,
            c.partially_balanced,
            c.completely_imbalanced,
            round2_str(self.directed_nonpartial.ratio),
            self.directed_nonpartial.balanced,
            self.directed_nonpartial.imbalanced,
            opt2(self.undirected.ratio),
            self.undirected.balanced,
            self.undirected.imbalanced,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_decimal_rounding() {
        assert_eq!(round2_str(0.8676), "0.87");
        assert_eq!(round2_str(116.0 / 240.0), "0.48");
        assert_eq!(round2_str(1.0), "1.00");
        assert_eq!(round2_str(0.0), "0.00");
        // ties go to the even hundredth
        assert_eq!(round2_str(0.125), "0.12");
        assert_eq!(round2_str(0.375), "0.38");
    }
}

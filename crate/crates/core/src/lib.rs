//! Partial balance of signed directed networks: triad census, transitive
//! triple balance, sign composition and comparison with the undirected
//! projection.

pub mod balance;
pub mod census;
pub mod cli;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod signstats;

pub use balance::{balance_report, BalanceMode, BalanceReport, BalanceTally};
pub use census::{census, enumerate_triads, CensusTable, Triad, TriadType, Triple};
pub use error::{Error, Result};
pub use graph::{EdgeRecord, InputFormat, PreprocessConfig, Sign, SignedDigraph, SignedGraph};

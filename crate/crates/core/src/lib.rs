//! Verification, construction and exact search for k-stable matchings in
//! house allocation, stable marriage and stable roommates instances.

pub mod construct;
pub mod engines;
pub mod error;
pub mod generators;
pub mod io;
pub mod model;
pub mod oracle;
pub mod verify;
pub mod x3c;

pub use error::{Error, Result};
pub use model::{Instance, Matching, ModelKind, PreferenceList, Threshold};
pub use verify::{stability_number, StabilityReport};

/// Integer-weighted graph, the form used by verification.
pub type IntGraph = engines::Graph<i64>;
/// Exact rational weights.
pub type RationalGraph = engines::Graph<num_rational::Ratio<i64>>;
/// Exact rational threshold fraction.
pub type Fraction = num_rational::Ratio<u64>;

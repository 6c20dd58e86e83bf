//! Hashing-based approximate model counting for DNF formulas.
//!
//! The main entry point is [`counter::approx_count`], an FPRAS built from
//! row-echelon XOR hashing over the symbolic universe `{(x, c_i) : x ⊨ c_i}`
//! with stochastic cell counting. [`baselines`] holds two independent
//! counters (Karp-Luby-Madras Monte Carlo and an XOR/Gaussian-elimination
//! hashing counter) and [`formula::exact_count`] is the brute-force oracle.

pub mod baselines;
pub mod bench;
pub mod counter;
pub mod decimal;
pub mod error;
pub mod formula;
pub mod gf2;
pub mod hashing;
pub mod par;
pub mod verify;

pub use counter::{approx_count, CounterParams, CountEstimate};
pub use error::{Error, Result};
pub use formula::{exact_count, parse_dnf, serialize_dnf, DnfFormula};

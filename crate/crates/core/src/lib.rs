//! Verification kernels for exponential-sum and summation-formula identities.
//!
//! The crate evaluates the finite, computable objects that appear in
//! delta-method subconvexity arguments — Gauss, Kloosterman and Ramanujan
//! sums, Jutila's circle-method approximant, Voronoi summation for level-1
//! holomorphic forms, and the associated oscillatory integrals — and checks
//! their identities and bounds against brute-force oracles at desk scale.
//!
//! Everything is deterministic: sampled scans are seeded, parallel scans
//! reduce in a fixed order, and reports serialize with stable field order.

pub mod autforms;
pub mod charsums;
pub mod circle;
pub mod error;
pub mod modarith;
pub mod oscint;
pub mod pipeline;
pub mod report;

pub use error::Error;
pub use report::VerificationReport;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

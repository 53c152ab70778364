//! Nonparametric estimation of the overlap coefficient (OVL) between two
//! one-dimensional class-conditional densities.
//!
//! The estimator searches the `(n+1)`-ary split of the real line that
//! maximizes the misclassification-impurity goodness of a labeled sample.
//! The resulting cut values estimate the crossover points of `π₁f₁` and
//! `π₂f₂`, and the per-segment minority mass estimates
//! `ρ = ∫ min{π₁f₁, π₂f₂}`.
//!
//! Modules:
//!
//! - [`sampling`]: Gaussian/triangular components, two-class mixtures, seeded draws.
//! - [`empirical`]: sorted labeled datasets, prefix counts, the candidate grid.
//! - [`impurity`]: impurity functions and the empirical goodness functional.
//! - [`estimator`]: best-split searches (DP, exhaustive, min-ρ) and the plug-in OVL.
//! - [`oracle`]: exact crossovers and OVL for analytic mixtures.
//! - [`experiments`]: multi-trial convergence sweeps.

pub mod empirical;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod impurity;
mod label;
pub mod oracle;
pub mod sampling;

pub use empirical::{CandidateGrid, LabeledDataset, SegmentCounts, SplitVector};
pub use error::{Error, Result};
pub use estimator::{Algorithm, EstimateResult};
pub use label::Label;
pub use oracle::OracleResult;
pub use sampling::{ClassDensity, DistributionComponent, TwoClassMixture};

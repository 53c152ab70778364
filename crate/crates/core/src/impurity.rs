//! Impurity functions on the 1-simplex and the empirical split goodness
//! `ĥ_N(v) = ΔÎ_N(S_v)`.

use crate::empirical::{LabeledDataset, SegmentCounts, SplitVector};
use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImpurityFunction {
    /// `ι(a, b) = 1 − max{a, b}`.
    #[default]
    Misclassification,
}

impl ImpurityFunction {
    pub fn iota(self, a: f64, b: f64) -> Result<f64> {
        if !(a >= 0.0 && b >= 0.0) || (a + b - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::OffSimplex { a, b });
        }
        Ok(self.eval(a, b))
    }

    fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            ImpurityFunction::Misclassification => 1.0 - a.max(b),
        }
    }

    /// `Î_N(B)` from the label counts of `B`; zero when `B` holds no sample.
    fn of_counts(self, counts: SegmentCounts) -> f64 {
        let total = counts.total();
        if total == 0 {
            return 0.0;
        }
        let t = total as f64;
        self.eval(counts.first as f64 / t, counts.second as f64 / t)
    }
}

/// `ΔÎ_N(S_v) = Î_N(ℝ) − Σ_k P̂_N(X ∈ S_k) Î_N(S_k)`, evaluated literally in
/// floating point.
pub fn goodness_definitional(ds: &LabeledDataset, sv: &SplitVector, imp: ImpurityFunction) -> f64 {
    let n = ds.len() as f64;
    let whole = imp.of_counts(ds.label_counts());
    let weighted: f64 = ds.segment_counts(sv).into_iter().map(|c| (c.total() as f64 / n) * imp.of_counts(c)).sum();
    whole - weighted
}

/// Integer numerator `Σ_k max_j N_XY(S_k, j) − max_j N_Y(j)` of the
/// misclassification goodness. Never negative.
pub fn goodness_numerator(ds: &LabeledDataset, segments: &[SegmentCounts]) -> usize {
    let majority_sum: usize = segments.iter().map(|c| c.majority()).sum();
    majority_sum - ds.label_counts().majority()
}

/// Closed form `ĥ_N(v) = (1/N)[Σ_k max_j N_XY(S_k, j) − max_j N_Y(j)]` for
/// misclassification impurity, with a single final division.
pub fn goodness_closed_form(ds: &LabeledDataset, sv: &SplitVector) -> f64 {
    goodness_numerator(ds, &ds.segment_counts(sv)) as f64 / ds.len() as f64
}

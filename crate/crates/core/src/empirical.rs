//! Sorted labeled samples, prefix label counts and the candidate cut grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// Labeled sample sorted by `x` (stable, so tied values keep input order)
/// with inclusive prefix counts per label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    xs: Vec<f64>,
    ys: Vec<Label>,
    prefix1: Vec<usize>,
    prefix2: Vec<usize>,
}

/// Label counts `(N_XY(S,1), N_XY(S,2))` of one segment `S`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCounts {
    pub first: usize,
    pub second: usize,
}

impl SegmentCounts {
    pub fn total(self) -> usize {
        self.first + self.second
    }

    pub fn majority(self) -> usize {
        self.first.max(self.second)
    }

    pub fn minority(self) -> usize {
        self.first.min(self.second)
    }
}

impl LabeledDataset {
    pub fn new(samples: &[(f64, Label)]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(index) = samples.iter().position(|(x, _)| !x.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut prefix1 = Vec::with_capacity(sorted.len());
        let mut prefix2 = Vec::with_capacity(sorted.len());
        let (mut c1, mut c2) = (0, 0);
        for (_, y) in &sorted {
            match y {
                Label::First => c1 += 1,
                Label::Second => c2 += 1,
            }
            prefix1.push(c1);
            prefix2.push(c2);
        }
        let (xs, ys) = sorted.into_iter().unzip();
        Ok(LabeledDataset { xs, ys, prefix1, prefix2 })
    }

    /// Builds from integer labels, rejecting anything outside `{1, 2}`.
    pub fn from_raw(samples: &[(f64, i64)]) -> Result<Self> {
        let labeled = samples
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Label::from_raw(y, i).map(|label| (x, label)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&labeled)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[Label] {
        &self.ys
    }

    pub fn prefix1(&self) -> &[usize] {
        &self.prefix1
    }

    pub fn prefix2(&self) -> &[usize] {
        &self.prefix2
    }

    /// `(N_Y(1), N_Y(2))`.
    pub fn label_counts(&self) -> SegmentCounts {
        self.counts_below(self.len())
    }

    /// `(π̂₁, π̂₂) = (N_Y(1)/N, N_Y(2)/N)`.
    pub fn empirical_priors(&self) -> (f64, f64) {
        let counts = self.label_counts();
        let n = self.len() as f64;
        (counts.first as f64 / n, counts.second as f64 / n)
    }

    /// Number of samples with `x <= v`.
    pub fn rank_of(&self, v: f64) -> usize {
        self.xs.partition_point(|&x| x <= v)
    }

    /// Label counts among the `rank` smallest samples.
    pub fn counts_below(&self, rank: usize) -> SegmentCounts {
        if rank == 0 {
            SegmentCounts::default()
        } else {
            SegmentCounts { first: self.prefix1[rank - 1], second: self.prefix2[rank - 1] }
        }
    }

    /// Label counts of sorted positions `lo..hi`.
    pub fn counts_between(&self, lo: usize, hi: usize) -> SegmentCounts {
        debug_assert!(lo <= hi);
        let upper = self.counts_below(hi);
        let lower = self.counts_below(lo);
        SegmentCounts { first: upper.first - lower.first, second: upper.second - lower.second }
    }

    /// Label counts of each of the `m + 1` segments of `sv`, using the
    /// right-closed convention `(v_{k-1}, v_k]`.
    pub fn segment_counts(&self, sv: &SplitVector) -> Vec<SegmentCounts> {
        self.segment_counts_by_rank(sv.cuts().iter().map(|&v| self.rank_of(v)))
    }

    pub(crate) fn segment_counts_by_rank(&self, ranks: impl IntoIterator<Item = usize>) -> Vec<SegmentCounts> {
        let mut out = Vec::new();
        let mut prev = 0;
        for rank in ranks {
            out.push(self.counts_between(prev, rank));
            prev = rank;
        }
        out.push(self.counts_between(prev, self.len()));
        out
    }

    pub fn candidate_grid(&self) -> CandidateGrid {
        let zs: Vec<f64> = if self.xs.len() == 1 {
            vec![self.xs[0]]
        } else {
            self.xs.windows(2).map(|w| midpoint(w[0], w[1])).collect()
        };
        let ranks = zs.iter().map(|&z| self.rank_of(z)).collect();
        CandidateGrid { zs, ranks }
    }
}

/// `(a + b) / 2`, clamped into `[a, b]`.
fn midpoint(a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    let m = if m.is_finite() { m } else { 0.5 * a + 0.5 * b };
    m.clamp(a, b)
}

/// Candidate cut values `Z_i = (X_{N:i} + X_{N:i+1}) / 2`, plus the rank
/// `#{x <= Z_i}` of each so searches never re-run the binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGrid {
    zs: Vec<f64>,
    ranks: Vec<usize>,
}

impl CandidateGrid {
    pub fn values(&self) -> &[f64] {
        &self.zs
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zs.is_empty()
    }

    pub fn split_vector(&self, indices: &[usize]) -> Result<SplitVector> {
        SplitVector::new(indices.iter().map(|&i| self.zs[i]).collect())
    }
}

/// Weakly increasing cut values `v₁ ≤ … ≤ v_m` defining the segments
/// `(-∞, v₁], (v₁, v₂], …, (v_m, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitVector {
    cuts: Vec<f64>,
}

impl SplitVector {
    pub fn new(cuts: Vec<f64>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::InvalidSplit("at least one cut is required".into()));
        }
        if cuts.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidSplit("cut values must not be NaN".into()));
        }
        if cuts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSplit(format!("cuts must be weakly increasing: {cuts:?}")));
        }
        Ok(SplitVector { cuts })
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{First as L1, Second as L2};

    fn ds(samples: &[(f64, i64)]) -> LabeledDataset {
        LabeledDataset::from_raw(samples).unwrap()
    }

    #[test]
    fn two_point_sort() {
        let d = ds(&[(2.0, 1), (1.0, 2)]);
        assert_eq!(d.xs(), &[1.0, 2.0]);
        assert_eq!(d.ys(), &[L2, L1]);
        assert_eq!(d.prefix1(), &[0, 1]);
        assert_eq!(d.prefix2(), &[1, 1]);
    }

    #[test]
    fn ties_are_kept_in_input_order() {
        let d = ds(&[(0.0, 1), (0.0, 2)]);
        assert_eq!(d.xs(), &[0.0, 0.0]);
        assert_eq!(d.ys(), &[L1, L2]);
        assert_eq!(d.prefix1(), &[1, 1]);
        assert_eq!(d.prefix2(), &[0, 1]);
        let d = ds(&[(0.0, 2), (0.0, 1)]);
        assert_eq!(d.ys(), &[L2, L1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(LabeledDataset::new(&[]), Err(Error::EmptyDataset));
        assert_eq!(LabeledDataset::from_raw(&[(0.0, 1), (1.0, 3)]), Err(Error::InvalidLabel { index: 1, value: 3 }));
        assert_eq!(LabeledDataset::from_raw(&[(f64::NAN, 1)]), Err(Error::NonFiniteValue { index: 0 }));
    }

    #[test]
    fn priors() {
        assert_eq!(ds(&[(0.0, 1), (1.0, 1), (2.0, 2)]).empirical_priors(), (2.0 / 3.0, 1.0 / 3.0));
        assert_eq!(ds(&[(0.0, 1), (1.0, 1)]).empirical_priors(), (1.0, 0.0));
    }

    #[test]
    fn segment_counts_enumeration() {
        let d = ds(&[(1.0, 1), (2.0, 2), (3.0, 1)]);
        let counts = d.segment_counts(&SplitVector::new(vec![1.5]).unwrap());
        assert_eq!(counts, vec![SegmentCounts { first: 1, second: 0 }, SegmentCounts { first: 1, second: 1 }]);
    }

    #[test]
    fn segment_counts_right_closed() {
        let d = ds(&[(1.0, 1), (2.0, 2), (3.0, 1)]);
        let counts = d.segment_counts(&SplitVector::new(vec![2.0]).unwrap());
        assert_eq!(counts[0], SegmentCounts { first: 1, second: 1 });
        assert_eq!(counts[1], SegmentCounts { first: 1, second: 0 });
    }

    #[test]
    fn repeated_cut_gives_empty_middle() {
        let d = ds(&[(1.0, 1), (2.0, 2), (3.0, 1)]);
        let counts = d.segment_counts(&SplitVector::new(vec![2.5, 2.5]).unwrap());
        assert_eq!(counts.len(), 3);
        assert_eq!(counts[1], SegmentCounts::default());
        assert_eq!(counts.iter().map(|c| c.total()).sum::<usize>(), 3);
    }

    #[test]
    fn grid_values() {
        assert_eq!(ds(&[(0.0, 1), (1.0, 2)]).candidate_grid().values(), &[0.5]);
        assert_eq!(ds(&[(0.0, 1), (0.0, 2), (1.0, 1)]).candidate_grid().values(), &[0.0, 0.5]);
        let single = ds(&[(7.0, 2)]).candidate_grid();
        assert_eq!(single.values(), &[7.0]);
        assert_eq!(single.ranks(), &[1]);
    }

    #[test]
    fn grid_ranks_follow_duplicates() {
        let g = ds(&[(0.0, 1), (0.0, 2), (1.0, 1)]).candidate_grid();
        assert_eq!(g.ranks(), &[2, 2]);
    }

    #[test]
    fn midpoint_of_adjacent_floats_stays_in_range() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let m = midpoint(a, b);
        assert!(a <= m && m <= b);
        assert_eq!(midpoint(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(midpoint(-f64::MAX, f64::MAX), 0.0);
        assert_eq!(midpoint(-3.0, 5.0), 1.0);
    }

    #[test]
    fn split_vector_validation() {
        assert!(SplitVector::new(vec![]).is_err());
        assert!(SplitVector::new(vec![1.0, 0.0]).is_err());
        assert!(SplitVector::new(vec![f64::NAN]).is_err());
        assert!(SplitVector::new(vec![0.0, 0.0, 1.0]).is_ok());
    }
}

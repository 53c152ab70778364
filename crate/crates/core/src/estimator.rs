//! Best multi-way split search and the plug-in overlap estimator.
//!
//! All searches run over weakly increasing index tuples
//! `i₁ ≤ … ≤ i_n` into the candidate grid and break ties toward the
//! lexicographically smallest tuple. Objectives are kept as integer label
//! counts; the `1/N` factor and the constant `max_j N_Y(j)` are applied
//! only when reporting.

use serde::{Deserialize, Serialize};

use crate::empirical::{CandidateGrid, LabeledDataset, SegmentCounts, SplitVector};
use crate::error::{Error, Result};
use crate::impurity::goodness_numerator;

/// Largest number of tuples [`search_exhaustive`] will enumerate.
pub const EXHAUSTIVE_TUPLE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    Dp,
    Exhaustive,
    MinRho,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Dp => "dp",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::MinRho => "min-rho",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Algorithm::Dp),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "min-rho" => Ok(Algorithm::MinRho),
            other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub n_crossovers: usize,
    pub v_hat: Vec<f64>,
    pub candidate_indices: Vec<usize>,
    pub rho_hat: f64,
    pub h_at_optimum: f64,
    pub pi_hat: (f64, f64),
    pub algorithm: Algorithm,
    pub n_samples: usize,
}

impl EstimateResult {
    fn at_indices(ds: &LabeledDataset, grid: &CandidateGrid, indices: Vec<usize>, algorithm: Algorithm) -> Self {
        let segments = ds.segment_counts_by_rank(indices.iter().map(|&i| grid.ranks()[i]));
        let n = ds.len() as f64;
        let minority: usize = segments.iter().map(|c| c.minority()).sum();
        EstimateResult {
            n_crossovers: indices.len(),
            v_hat: indices.iter().map(|&i| grid.values()[i]).collect(),
            rho_hat: minority as f64 / n,
            h_at_optimum: goodness_numerator(ds, &segments) as f64 / n,
            pi_hat: ds.empirical_priors(),
            algorithm,
            n_samples: ds.len(),
            candidate_indices: indices,
        }
    }

    /// Result for the `n = 0` case: no split, `ρ̂ = min(π̂₁, π̂₂)`.
    pub fn no_crossover(ds: &LabeledDataset, algorithm: Algorithm) -> Self {
        EstimateResult {
            n_crossovers: 0,
            v_hat: Vec::new(),
            candidate_indices: Vec::new(),
            rho_hat: estimate_no_crossover(ds),
            h_at_optimum: 0.0,
            pi_hat: ds.empirical_priors(),
            algorithm,
            n_samples: ds.len(),
        }
    }

    pub fn split_vector(&self) -> Option<SplitVector> {
        SplitVector::new(self.v_hat.clone()).ok()
    }
}

/// Plug-in overlap of a split, `ρ̂_{v,N} = (1/N) Σ_k min_j N_XY(S_k, j)`.
pub fn rho_hat(ds: &LabeledDataset, sv: &SplitVector) -> f64 {
    let minority: usize = ds.segment_counts(sv).iter().map(|c| c.minority()).sum();
    minority as f64 / ds.len() as f64
}

/// OVL estimate when the densities never cross: the smaller empirical prior.
pub fn estimate_no_crossover(ds: &LabeledDataset) -> f64 {
    ds.label_counts().minority() as f64 / ds.len() as f64
}

/// Dispatches to the requested search; `n = 0` yields the no-crossover estimate.
pub fn estimate(ds: &LabeledDataset, n: usize, algorithm: Algorithm) -> Result<EstimateResult> {
    if n == 0 {
        return Ok(EstimateResult::no_crossover(ds, algorithm));
    }
    match algorithm {
        Algorithm::Dp => search_dp(ds, n),
        Algorithm::Exhaustive => search_exhaustive(ds, n),
        Algorithm::MinRho => search_min_rho(ds, n),
    }
}

fn require_cuts(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "search needs at least one cut; use the no-crossover estimate for n = 0".into(),
        ));
    }
    Ok(())
}

/// Number of weakly increasing `n`-tuples over `k` grid points, `C(k+n-1, n)`,
/// saturating at `u128::MAX`.
pub fn tuple_count(k: usize, n: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        // acc * (k + i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(k as u128 + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Brute-force maximizer of `ĥ_N` over every tuple of the grid. Each
/// candidate is scored through [`LabeledDataset::segment_counts`] on the cut
/// values themselves. Refuses more than [`EXHAUSTIVE_TUPLE_LIMIT`] tuples.
pub fn search_exhaustive(ds: &LabeledDataset, n: usize) -> Result<EstimateResult> {
    require_cuts(n)?;
    let grid = ds.candidate_grid();
    let k = grid.len();
    let count = tuple_count(k, n);
    if count > EXHAUSTIVE_TUPLE_LIMIT {
        return Err(Error::TooManyTuples { count, limit: EXHAUSTIVE_TUPLE_LIMIT });
    }

    let mut tuple = vec![0usize; n];
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let sv = grid.split_vector(&tuple)?;
        let score = goodness_numerator(ds, &ds.segment_counts(&sv));
        // Lexicographic enumeration order, so only a strict improvement replaces.
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, tuple.clone()));
        }
        if !next_weak_tuple(&mut tuple, k) {
            break;
        }
    }
    let (_, indices) = best.expect("grid is never empty");
    Ok(EstimateResult::at_indices(ds, &grid, indices, Algorithm::Exhaustive))
}

/// Advances to the next weakly increasing tuple in lexicographic order.
fn next_weak_tuple(tuple: &mut [usize], k: usize) -> bool {
    let Some(pos) = tuple.iter().rposition(|&i| i + 1 < k) else {
        return false;
    };
    let v = tuple[pos] + 1;
    tuple[pos..].fill(v);
    true
}

/// Exact maximizer of `ĥ_N` by dynamic programming over the grid.
pub fn search_dp(ds: &LabeledDataset, n: usize) -> Result<EstimateResult> {
    require_cuts(n)?;
    let grid = ds.candidate_grid();
    let indices = layered_search::<Majority>(ds, &grid, n);
    Ok(EstimateResult::at_indices(ds, &grid, indices, Algorithm::Dp))
}

/// Exact minimizer of `ρ̂_{v,N}` over the same tuple space. Its optimizer set
/// coincides with the goodness maximizers because `ĥ + ρ̂ = 1 − max π̂` for
/// every split.
pub fn search_min_rho(ds: &LabeledDataset, n: usize) -> Result<EstimateResult> {
    require_cuts(n)?;
    let grid = ds.candidate_grid();
    let indices = layered_search::<Minority>(ds, &grid, n);
    Ok(EstimateResult::at_indices(ds, &grid, indices, Algorithm::MinRho))
}

/// Segment objective that is either the larger or the smaller label count.
///
/// Both are of the form `pick(a₁ − b₁, a₂ − b₂)` for a monotone `pick`, so
/// the DP transition `best over j ≥ i of score(i, j) + tail[j]` separates into
/// per-label suffix extrema and each layer costs `O(K)`.
trait SegmentObjective {
    /// `true` when larger totals are better.
    const MAXIMIZE: bool;

    fn pick(a: usize, b: usize) -> usize;

    fn segment(c: SegmentCounts) -> usize {
        Self::pick(c.first, c.second)
    }

    fn better(candidate: usize, incumbent: usize) -> bool {
        if Self::MAXIMIZE {
            candidate > incumbent
        } else {
            candidate < incumbent
        }
    }
}

struct Majority;
struct Minority;

impl SegmentObjective for Majority {
    const MAXIMIZE: bool = true;

    fn pick(a: usize, b: usize) -> usize {
        a.max(b)
    }
}

impl SegmentObjective for Minority {
    const MAXIMIZE: bool = false;

    fn pick(a: usize, b: usize) -> usize {
        a.min(b)
    }
}

fn layered_search<O: SegmentObjective>(ds: &LabeledDataset, grid: &CandidateGrid, n: usize) -> Vec<usize> {
    let k = grid.len();
    let below: Vec<SegmentCounts> = grid.ranks().iter().map(|&r| ds.counts_below(r)).collect();
    let total = ds.label_counts();
    let score = |from: SegmentCounts, to: SegmentCounts| O::pick(to.first - from.first, to.second - from.second);

    // tails[t][i]: best objective of everything right of cut i when t more
    // cuts are still to be placed at indices >= i.
    let mut tails: Vec<Vec<usize>> = Vec::with_capacity(n);
    tails.push(below.iter().map(|&b| score(b, total)).collect());
    for t in 1..n {
        let prev = &tails[t - 1];
        let mut layer = vec![0usize; k];
        let mut ext1 = 0usize;
        let mut ext2 = 0usize;
        for i in (0..k).rev() {
            let c1 = below[i].first + prev[i];
            let c2 = below[i].second + prev[i];
            if i == k - 1 {
                ext1 = c1;
                ext2 = c2;
            } else if O::MAXIMIZE {
                ext1 = ext1.max(c1);
                ext2 = ext2.max(c2);
            } else {
                ext1 = ext1.min(c1);
                ext2 = ext2.min(c2);
            }
            layer[i] = O::pick(ext1 - below[i].first, ext2 - below[i].second);
        }
        tails.push(layer);
    }

    let origin = SegmentCounts::default();
    let head = &tails[n - 1];
    let mut first = 0;
    let mut best = score(origin, below[0]) + head[0];
    for i in 1..k {
        let value = score(origin, below[i]) + head[i];
        if O::better(value, best) {
            best = value;
            first = i;
        }
    }

    let mut indices = Vec::with_capacity(n);
    indices.push(first);
    let mut current = first;
    for t in (0..n - 1).rev() {
        let target = tails[t + 1][current];
        let next = (current..k)
            .find(|&j| score(below[current], below[j]) + tails[t][j] == target)
            .expect("DP layer value is attained by some successor");
        indices.push(next);
        current = next;
    }
    debug_assert_eq!(
        ds.segment_counts_by_rank(indices.iter().map(|&i| grid.ranks()[i])).into_iter().map(O::segment).sum::<usize>(),
        best
    );
    indices
}

//! Ground truth for analytic mixtures: crossover points of `π₁f₁` and
//! `π₂f₂`, and the exact overlap `ρ = ∫ min{π₁f₁, π₂f₂}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::sampling::{std_normal_cdf, TwoClassMixture};

/// Bisection stops once the bracket is at most this wide.
pub const BISECTION_TOL: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub crossovers: Vec<f64>,
    pub rho_true: f64,
}

impl OracleResult {
    pub fn case1() -> Self {
        OracleResult { crossovers: crossovers_case1(), rho_true: rho_case1_closed_form() }
    }

    pub fn case2() -> Self {
        OracleResult { crossovers: crossovers_case2(), rho_true: rho_case2_closed_form() }
    }

    /// Crossovers by grid + bisection over the mixture's support, then `ρ`
    /// from segment CDF differences.
    pub fn numeric(mixture: &TwoClassMixture) -> Result<Self> {
        let (lo, hi) = mixture.support_hint();
        let crossovers = generic_crossovers(mixture, lo, hi, DEFAULT_GRID_POINTS)?;
        let rho_true = rho_true(mixture, &crossovers);
        Ok(OracleResult { crossovers, rho_true })
    }
}

/// `{ln 2 / 2}` for `π = (2/3, 1/3)`, `f₁ = ν(-1, 1)`, `f₂ = ν(1, 1)`.
pub fn crossovers_case1() -> Vec<f64> {
    vec![std::f64::consts::LN_2 / 2.0]
}

/// `{−c, c}` with `cosh c = 0.8√e`.
pub fn crossovers_case2() -> Vec<f64> {
    let c = (0.8 * 0.5f64.exp()).acosh();
    vec![-c, c]
}

/// `[2 − 2Φ(c₁ + 1) + Φ(c₁ − 1)] / 3`.
pub fn rho_case1_closed_form() -> f64 {
    let c1 = crossovers_case1()[0];
    (2.0 - 2.0 * std_normal_cdf(c1 + 1.0) + std_normal_cdf(c1 - 1.0)) / 3.0
}

/// `0.8 − 0.5Φ(c₁ + 1) + 0.5Φ(c₂ + 1) − 0.8Φ(c₂)`.
pub fn rho_case2_closed_form() -> f64 {
    let c = crossovers_case2();
    0.8 - 0.5 * std_normal_cdf(c[0] + 1.0) + 0.5 * std_normal_cdf(c[1] + 1.0) - 0.8 * std_normal_cdf(c[1])
}

/// Sign changes of `π₁f₁ − π₂f₂` on `[lo, hi]`.
///
/// The gap is evaluated on `grid_points` equally spaced points; each bracket
/// with a strict sign change is bisected down to [`BISECTION_TOL`]. Points
/// where the densities touch without crossing are not reported. Two roots
/// inside one grid cell cancel out and are missed, so the grid must be fine
/// enough to separate the roots being looked for.
pub fn generic_crossovers(mixture: &TwoClassMixture, lo: f64, hi: f64, grid_points: usize) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidParameter(format!("crossover bracket requires finite lo < hi, got [{lo}, {hi}]")));
    }
    if grid_points < 2 {
        return Err(Error::InvalidParameter("crossover grid needs at least 2 points".into()));
    }
    let gap = |x: f64| mixture.density_gap(x);
    let step = (hi - lo) / (grid_points - 1) as f64;
    let xs: Vec<f64> = (0..grid_points).map(|i| if i + 1 == grid_points { hi } else { lo + step * i as f64 }).collect();

    let mut roots = Vec::new();
    // Last grid point with a nonzero gap, and the first exact zero seen since.
    let mut last: Option<(f64, f64)> = None;
    let mut zero_run: Option<f64> = None;
    for &x in &xs {
        let g = gap(x);
        if g == 0.0 {
            zero_run.get_or_insert(x);
            continue;
        }
        if let Some((x_prev, g_prev)) = last {
            if g_prev.signum() != g.signum() {
                let root = match zero_run {
                    Some(z) => z,
                    None => bisect(&gap, x_prev, x, g_prev),
                };
                roots.push(root);
            }
        }
        last = Some((x, g));
        zero_run = None;
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sign_a = fa.signum();
    while b - a > BISECTION_TOL {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Label whose weighted density is the smaller one on the open interval
/// `(left, right)`, decided by the sign of the gap at an interior point.
fn minority_label(mixture: &TwoClassMixture, left: f64, right: f64) -> Label {
    for probe in interior_probes(left, right) {
        let g = mixture.density_gap(probe);
        if g > 0.0 {
            return Label::Second;
        }
        if g < 0.0 {
            return Label::First;
        }
    }
    // Densities agree at every probe; either choice integrates the same.
    Label::First
}

fn interior_probes(left: f64, right: f64) -> Vec<f64> {
    match (left.is_finite(), right.is_finite()) {
        (true, true) => [0.5, 0.25, 0.75, 0.125, 0.875].iter().map(|t| left + t * (right - left)).collect(),
        (true, false) => [1.0, 0.5, 2.0, 4.0].iter().map(|d| left + d).collect(),
        (false, true) => [1.0, 0.5, 2.0, 4.0].iter().map(|d| right - d).collect(),
        (false, false) => vec![0.0, 1.0, -1.0, 4.0, -4.0],
    }
}

/// `ρ(π₁f₁, π₂f₂) = Σ_k min_j π_j [F_j(c_k) − F_j(c_{k−1})]` with
/// `c₀ = −∞` and `c_{n+1} = ∞`. `crossovers` must be sorted and complete.
pub fn rho_true(mixture: &TwoClassMixture, crossovers: &[f64]) -> f64 {
    let bounds: Vec<f64> = std::iter::once(f64::NEG_INFINITY)
        .chain(crossovers.iter().copied())
        .chain(std::iter::once(f64::INFINITY))
        .collect();
    let priors = mixture.priors();
    bounds
        .windows(2)
        .map(|w| {
            let label = minority_label(mixture, w[0], w[1]);
            let f = mixture.class(label);
            let upper = if w[1].is_finite() { f.cdf(w[1]) } else { 1.0 };
            let lower = if w[0].is_finite() { f.cdf(w[0]) } else { 0.0 };
            priors[label.index()] * (upper - lower)
        })
        .sum()
}

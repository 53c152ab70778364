//! Oracles shared by the integration tests. Nothing here calls into the
//! search or counting code paths it is used to check.
#![allow(dead_code)]

use ovl_core::{Label, LabeledDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature on `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}

/// Integral over `[a, b]` split at `breaks` (kinks and crossovers) so each
/// piece is smooth.
pub fn piecewise_quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    let pieces = (points.len() - 1) as f64;
    points.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], tol / pieces)).sum()
}

/// Label counts of each segment by a linear scan over the raw samples.
pub fn scan_segment_counts(samples: &[(f64, Label)], cuts: &[f64]) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); cuts.len() + 1];
    for &(x, y) in samples {
        let k = cuts.iter().filter(|&&v| x > v).count();
        match y {
            Label::First => out[k].0 += 1,
            Label::Second => out[k].1 += 1,
        }
    }
    out
}

/// Candidate cuts `Z_i` recomputed from a fresh sort of the raw samples.
pub fn grid_by_sort(samples: &[(f64, Label)]) -> Vec<f64> {
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.len() == 1 {
        return xs;
    }
    xs.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
}

/// Every weakly increasing `n`-tuple over `0..k`, in lexicographic order.
pub fn all_weak_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(k, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `(Σ_k max, Σ_k min)` of the scanned segment counts.
pub fn scan_scores(samples: &[(f64, Label)], cuts: &[f64]) -> (usize, usize) {
    scan_segment_counts(samples, cuts).into_iter().fold((0, 0), |(mx, mn), (a, b)| (mx + a.max(b), mn + a.min(b)))
}

/// Random labeled sample. `distinct_levels` > 0 rounds x onto that many
/// levels so ties are common.
pub fn random_samples(rng: &mut ChaCha8Rng, n: usize, distinct_levels: u32) -> Vec<(f64, Label)> {
    (0..n)
        .map(|_| {
            let raw: f64 = rng.random_range(-3.0..3.0);
            let x = if distinct_levels > 0 { (raw * distinct_levels as f64 / 6.0).round() } else { raw };
            let y = if rng.random_bool(0.5) { Label::First } else { Label::Second };
            (x, y)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dataset(samples: &[(f64, Label)]) -> LabeledDataset {
    LabeledDataset::new(samples).expect("valid samples")
}

/// Random weakly increasing cuts spanning slightly beyond the sample range.
pub fn random_cuts(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..m).map(|_| rng.random_range(-3.5..3.5)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts
}

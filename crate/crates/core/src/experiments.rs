//! Repeated-trial convergence sweeps on analytic mixtures.
//!
//! Two protocols are supported. `Nested` draws one stream of
//! `max(sizes)` samples per trial and evaluates every prefix, so the
//! `N = 100` estimate reuses the first 100 draws of the `N = 10000` one.
//! `Independent` draws a fresh stream for every `(trial, size)` pair.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::empirical::LabeledDataset;
use crate::error::{Error, Result};
use crate::estimator::{estimate, Algorithm};
use crate::oracle::OracleResult;
use crate::sampling::{derive_seed, TwoClassMixture};

pub const DEFAULT_SIZES: [usize; 3] = [100, 1000, 10_000];
pub const DEFAULT_TRIALS: usize = 30;

const NESTED_TAG: u64 = 0x6e65_7374;
const INDEPENDENT_TAG: u64 = 0x696e_6470;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    #[default]
    Nested,
    Independent,
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nested" => Ok(Protocol::Nested),
            "independent" => Ok(Protocol::Independent),
            other => Err(Error::InvalidConfig(format!("unknown protocol {other:?}"))),
        }
    }
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Protocol::Nested => "nested",
            Protocol::Independent => "independent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// Two unit Gaussians at ∓1 with priors 2/3, 1/3; one crossover.
    One,
    /// Gaussian pair vs. Gaussian/triangular mixture, equal priors; two crossovers.
    Two,
    /// Any mixture with a declared crossover count; ground truth is found numerically.
    Custom { mixture: TwoClassMixture, n_crossovers: Option<usize> },
}

impl Case {
    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            other => Err(Error::InvalidConfig(format!("unknown case {other}; expected 1 or 2"))),
        }
    }

    pub fn mixture(&self) -> TwoClassMixture {
        match self {
            Case::One => TwoClassMixture::case1(),
            Case::Two => TwoClassMixture::case2(),
            Case::Custom { mixture, .. } => mixture.clone(),
        }
    }

    pub fn oracle(&self) -> Result<OracleResult> {
        match self {
            Case::One => Ok(OracleResult::case1()),
            Case::Two => Ok(OracleResult::case2()),
            Case::Custom { mixture, n_crossovers } => {
                let expected =
                    n_crossovers.ok_or_else(|| Error::InvalidConfig("custom case needs a crossover count".into()))?;
                let oracle = OracleResult::numeric(mixture)?;
                if oracle.crossovers.len() != expected {
                    return Err(Error::InvalidConfig(format!(
                        "custom case declares {expected} crossovers but the oracle found {}",
                        oracle.crossovers.len()
                    )));
                }
                Ok(oracle)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub case: Case,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub protocol: Protocol,
    pub algorithm: Algorithm,
}

impl ExperimentConfig {
    pub fn new(case: Case, seed: u64) -> Self {
        ExperimentConfig {
            case,
            sizes: DEFAULT_SIZES.to_vec(),
            trials: DEFAULT_TRIALS,
            seed,
            protocol: Protocol::Nested,
            algorithm: Algorithm::Dp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidConfig("at least one sample size is required".into()));
        }
        if self.sizes[0] == 0 {
            return Err(Error::InvalidConfig("sample sizes must be positive".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(format!("sizes must be strictly increasing: {:?}", self.sizes)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub n_samples: usize,
    pub v_hat: Vec<f64>,
    /// `‖v̂ − c‖`.
    pub v_error: f64,
    pub rho_hat: f64,
    /// `|ρ̂ − ρ|`.
    pub rho_error: f64,
    pub h_hat: f64,
    pub pi_hat: (f64, f64),
    pub wall_time_ms: f64,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn evaluate(
    samples: &[(f64, crate::Label)],
    trial_index: usize,
    oracle: &OracleResult,
    algorithm: Algorithm,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let ds = LabeledDataset::new(samples)?;
    let est = estimate(&ds, oracle.crossovers.len(), algorithm)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(TrialRecord {
        trial_index,
        n_samples: samples.len(),
        v_error: euclidean(&est.v_hat, &oracle.crossovers),
        v_hat: est.v_hat,
        rho_error: (est.rho_hat - oracle.rho_true).abs(),
        rho_hat: est.rho_hat,
        h_hat: est.h_at_optimum,
        pi_hat: est.pi_hat,
        wall_time_ms,
    })
}

/// Seed of the sample stream used by `trial` (and `size`, for the
/// independent protocol).
pub fn trial_seed(master: u64, protocol: Protocol, trial: usize, size: usize) -> u64 {
    match protocol {
        Protocol::Nested => derive_seed(master, &[NESTED_TAG, trial as u64]),
        Protocol::Independent => derive_seed(master, &[INDEPENDENT_TAG, trial as u64, size as u64]),
    }
}

/// Runs every trial, in parallel across trials, and returns the records
/// ordered by `(trial_index, n_samples)`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let mixture = cfg.case.mixture();
    let oracle = cfg.case.oracle()?;
    let largest = *cfg.sizes.last().expect("validated nonempty");

    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| match cfg.protocol {
            Protocol::Nested => {
                let stream = mixture.sample_labeled(largest, trial_seed(cfg.seed, cfg.protocol, trial, largest))?;
                cfg.sizes.iter().map(|&size| evaluate(&stream[..size], trial, &oracle, cfg.algorithm)).collect()
            }
            Protocol::Independent => cfg
                .sizes
                .iter()
                .map(|&size| {
                    let stream = mixture.sample_labeled(size, trial_seed(cfg.seed, cfg.protocol, trial, size))?;
                    evaluate(&stream, trial, &oracle, cfg.algorithm)
                })
                .collect(),
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("scientific float round-trips");
    format!("{rounded}")
}

/// Header of the trial CSV for `n_crossovers` cut columns.
pub fn records_csv_header(n_crossovers: usize) -> String {
    let mut cols = vec!["trial".to_string(), "n_samples".to_string()];
    cols.extend((1..=n_crossovers).map(|k| format!("v_hat_{k}")));
    cols.extend(["v_error", "rho_hat", "rho_error", "pi1_hat"].map(String::from));
    cols.join(",")
}

/// Trial records as CSV text (timing excluded so reruns are byte-identical).
pub fn records_to_csv(records: &[TrialRecord], n_crossovers: usize) -> String {
    let mut out = records_csv_header(n_crossovers);
    out.push('\n');
    for r in records {
        let mut cells = vec![r.trial_index.to_string(), r.n_samples.to_string()];
        cells.extend(r.v_hat.iter().map(|&v| format_sig12(v)));
        cells.extend([r.v_error, r.rho_hat, r.rho_error, r.pi_hat.0].map(format_sig12));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl ErrorStats {
    fn of(values: &mut [f64]) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let median = if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) };
        ErrorStats { median, mean: values.iter().sum::<f64>() / n as f64, min: values[0], max: values[n - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n_samples: usize,
    pub trials: usize,
    pub v_error: ErrorStats,
    pub rho_error: ErrorStats,
}

/// Per-size error statistics, ordered by increasing sample size.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<SizeSummary>> {
    if records.is_empty() {
        return Err(Error::InvalidConfig("cannot summarize an empty record list".into()));
    }
    let mut groups: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let entry = groups.entry(r.n_samples).or_default();
        entry.0.push(r.v_error);
        entry.1.push(r.rho_error);
    }
    Ok(groups
        .into_iter()
        .map(|(n_samples, (mut v, mut rho))| SizeSummary {
            n_samples,
            trials: v.len(),
            v_error: ErrorStats::of(&mut v),
            rho_error: ErrorStats::of(&mut rho),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, v_error: f64, rho_error: f64) -> TrialRecord {
        TrialRecord {
            trial_index: 0,
            n_samples: n,
            v_hat: vec![0.0],
            v_error,
            rho_hat: 0.0,
            rho_error,
            h_hat: 0.0,
            pi_hat: (0.5, 0.5),
            wall_time_ms: 0.0,
        }
    }

    fn strip_timing(mut records: Vec<TrialRecord>) -> Vec<TrialRecord> {
        records.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
        records
    }

    #[test]
    fn summary_of_one_record() {
        let s = summarize(&[record(100, 0.3, 0.05)]).unwrap();
        assert_eq!(s.len(), 1);
        let ErrorStats { median, mean, min, max } = s[0].v_error;
        assert_eq!([median, mean, min, max], [0.3; 4]);
        assert_eq!(s[0].rho_error.median, 0.05);
    }

    #[test]
    fn even_median_averages() {
        let s = summarize(&[record(10, 0.1, 0.0), record(10, 0.3, 0.0)]).unwrap();
        assert!((s[0].v_error.median - 0.2).abs() < 1e-15);
        assert_eq!(s[0].trials, 2);
    }

    #[test]
    fn summary_groups_by_size() {
        let s = summarize(&[record(1000, 0.1, 0.0), record(100, 0.5, 0.0), record(1000, 0.2, 0.0)]).unwrap();
        assert_eq!(s.iter().map(|g| g.n_samples).collect::<Vec<_>>(), vec![100, 1000]);
        assert_eq!(s[1].trials, 2);
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(Case::One, 1);
        assert!(cfg.validate().is_ok());
        cfg.sizes = vec![100, 100];
        assert!(cfg.validate().is_err());
        cfg.sizes = vec![];
        assert!(cfg.validate().is_err());
        cfg.sizes = vec![0, 5];
        assert!(cfg.validate().is_err());
        cfg.sizes = vec![10];
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn nested_sweep_shape_and_determinism() {
        let cfg = ExperimentConfig { sizes: vec![50, 200], trials: 4, ..ExperimentConfig::new(Case::One, 11) };
        let a = run_sweep(&cfg).unwrap();
        assert_eq!(a.len(), 8);
        let keys: Vec<(usize, usize)> = a.iter().map(|r| (r.trial_index, r.n_samples)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(a.iter().all(|r| r.v_hat.len() == 1 && r.v_error >= 0.0 && r.rho_error >= 0.0));
        assert_eq!(strip_timing(a), strip_timing(run_sweep(&cfg).unwrap()));
    }

    #[test]
    fn nested_prefix_matches_direct_estimate() {
        let cfg = ExperimentConfig { sizes: vec![100, 1000], trials: 2, ..ExperimentConfig::new(Case::Two, 5) };
        let records = run_sweep(&cfg).unwrap();
        let mixture = TwoClassMixture::case2();
        let stream = mixture.sample_labeled(1000, trial_seed(5, Protocol::Nested, 1, 1000)).unwrap();
        let ds = LabeledDataset::new(&stream[..100]).unwrap();
        let direct = crate::estimator::search_dp(&ds, 2).unwrap();
        let rec = records.iter().find(|r| r.trial_index == 1 && r.n_samples == 100).unwrap();
        assert_eq!(rec.v_hat, direct.v_hat);
        assert_eq!(rec.rho_hat, direct.rho_hat);
    }

    #[test]
    fn independent_protocol_uses_fresh_draws() {
        let base = ExperimentConfig { sizes: vec![100, 1000], trials: 3, ..ExperimentConfig::new(Case::One, 8) };
        let nested = run_sweep(&base).unwrap();
        let indep = run_sweep(&ExperimentConfig { protocol: Protocol::Independent, ..base.clone() }).unwrap();
        assert_eq!(indep.len(), 6);
        assert_ne!(strip_timing(nested), strip_timing(indep.clone()));
        let stream =
            TwoClassMixture::case1().sample_labeled(100, trial_seed(8, Protocol::Independent, 2, 100)).unwrap();
        let direct = crate::estimator::search_dp(&LabeledDataset::new(&stream).unwrap(), 1).unwrap();
        assert_eq!(indep[4].v_hat, direct.v_hat);
    }

    #[test]
    fn custom_case_requires_crossover_count() {
        let mixture = TwoClassMixture::case1();
        let cfg = ExperimentConfig {
            sizes: vec![20],
            trials: 1,
            ..ExperimentConfig::new(Case::Custom { mixture: mixture.clone(), n_crossovers: None }, 1)
        };
        assert!(run_sweep(&cfg).is_err());
        let wrong =
            ExperimentConfig { case: Case::Custom { mixture: mixture.clone(), n_crossovers: Some(2) }, ..cfg.clone() };
        assert!(run_sweep(&wrong).is_err());
        let ok = ExperimentConfig { case: Case::Custom { mixture, n_crossovers: Some(1) }, ..cfg };
        let records = run_sweep(&ok).unwrap();
        assert_eq!(records.len(), 1);
    }

    #[test]
    fn records_satisfy_duality() {
        let cfg = ExperimentConfig { sizes: vec![30, 300], trials: 3, ..ExperimentConfig::new(Case::Two, 3) };
        for r in run_sweep(&cfg).unwrap() {
            let residual = r.h_hat + r.rho_hat - (1.0 - r.pi_hat.0.max(r.pi_hat.1));
            assert!(residual.abs() <= 1e-12);
        }
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.144_952_771_117_513_1), "0.144952771118");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(0.5), "0.5");
        assert_eq!(format_sig12(-0.778_882_287_751_757), "-0.778882287752");
        assert_eq!(format_sig12(12345.678), "12345.678");
        assert_eq!(format_sig12(0.0), "0");
    }

    #[test]
    fn csv_layout() {
        let mut r = record(100, 0.25, 0.125);
        r.v_hat = vec![-0.5, 0.75];
        r.rho_hat = 0.375;
        r.pi_hat = (0.52, 0.48);
        r.trial_index = 3;
        let csv = records_to_csv(&[r], 2);
        assert_eq!(
            csv,
            "trial,n_samples,v_hat_1,v_hat_2,v_error,rho_hat,rho_error,pi1_hat\n3,100,-0.5,0.75,0.25,0.375,0.125,0.52\n"
        );
    }

    #[test]
    fn case_ids() {
        assert_eq!(Case::from_id(1).unwrap(), Case::One);
        assert_eq!(Case::from_id(2).unwrap(), Case::Two);
        assert!(Case::from_id(3).is_err());
    }
}

//! Analytic densities and seeded labeled sampling.
//!
//! Random streams come from [`ChaCha8Rng`] seeded through
//! [`SeedableRng::seed_from_u64`]. Uniforms are `rng.random::<f64>()`
//! (53 high bits of one `u64`). Gaussian variates use the cosine branch of
//! Box–Muller (two uniforms per variate, sine branch discarded) and
//! triangular variates use the closed-form inverse CDF. A labeled draw
//! consumes, in order: one uniform for the label, one uniform for the
//! mixture component (only when the class has more than one component),
//! then the component's own uniforms. This layout is part of the
//! reproducibility contract and does not change within a release.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal CDF, `Φ(x) = erfc(-x/√2)/2`.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistributionComponent {
    Gaussian { mu: f64, sigma: f64 },
    Triangular { a: f64, b: f64 },
}

impl DistributionComponent {
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gaussian requires finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
            )));
        }
        Ok(DistributionComponent::Gaussian { mu, sigma })
    }

    /// Symmetric triangular density on `[a, b]` with its mode at the midpoint.
    pub fn triangular(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::InvalidParameter(format!("triangular requires finite a < b, got a={a}, b={b}")));
        }
        Ok(DistributionComponent::Triangular { a, b })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DistributionComponent::Gaussian { mu, sigma } => Self::gaussian(mu, sigma).map(drop),
            DistributionComponent::Triangular { a, b } => Self::triangular(a, b).map(drop),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            DistributionComponent::Gaussian { mu, sigma } => std_normal_pdf((x - mu) / sigma) / sigma,
            DistributionComponent::Triangular { a, b } => {
                let width = b - a;
                let mid = 0.5 * (a + b);
                if x < a || x > b {
                    0.0
                } else if x <= mid {
                    4.0 * (x - a) / (width * width)
                } else {
                    4.0 * (b - x) / (width * width)
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionComponent::Gaussian { mu, sigma } => std_normal_cdf((x - mu) / sigma),
            DistributionComponent::Triangular { a, b } => {
                let width = b - a;
                let mid = 0.5 * (a + b);
                if x <= a {
                    0.0
                } else if x >= b {
                    1.0
                } else if x <= mid {
                    2.0 * (x - a) * (x - a) / (width * width)
                } else {
                    1.0 - 2.0 * (b - x) * (b - x) / (width * width)
                }
            }
        }
    }

    /// Interval outside of which the density is negligible (Gaussian) or zero.
    pub fn support_hint(&self) -> (f64, f64) {
        match *self {
            DistributionComponent::Gaussian { mu, sigma } => (mu - 12.0 * sigma, mu + 12.0 * sigma),
            DistributionComponent::Triangular { a, b } => (a, b),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistributionComponent::Gaussian { mu, sigma } => {
                // u1 in (0, 1] keeps the logarithm finite.
                let u1 = 1.0 - rng.random::<f64>();
                let u2 = rng.random::<f64>();
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
                mu + sigma * z
            }
            DistributionComponent::Triangular { a, b } => {
                let u = rng.random::<f64>();
                let width = b - a;
                if u <= 0.5 {
                    a + width * (0.5 * u).sqrt()
                } else {
                    b - width * (0.5 * (1.0 - u)).sqrt()
                }
            }
        }
    }
}

/// Finite mixture of components with weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDensity {
    components: Vec<(f64, DistributionComponent)>,
}

impl ClassDensity {
    pub fn new(components: Vec<(f64, DistributionComponent)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("class density needs at least one component".into()));
        }
        let mut total = 0.0;
        for (weight, component) in &components {
            if !(0.0..=1.0).contains(weight) {
                return Err(Error::InvalidParameter(format!("component weight {weight} outside [0, 1]")));
            }
            component.validate()?;
            total += weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("component weights sum to {total}, expected 1")));
        }
        Ok(ClassDensity { components })
    }

    pub fn single(component: DistributionComponent) -> Self {
        ClassDensity { components: vec![(1.0, component)] }
    }

    pub fn components(&self) -> &[(f64, DistributionComponent)] {
        &self.components
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components.iter().map(|(w, c)| w * c.pdf(x)).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let value: f64 = self.components.iter().map(|(w, c)| w * c.cdf(x)).sum();
        value.clamp(0.0, 1.0)
    }

    pub fn support_hint(&self) -> (f64, f64) {
        self.components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, c)| {
            let (l, h) = c.support_hint();
            (lo.min(l), hi.max(h))
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let component = if self.components.len() == 1 {
            &self.components[0].1
        } else {
            let u = rng.random::<f64>();
            let mut acc = 0.0;
            let mut chosen = &self.components[self.components.len() - 1].1;
            for (w, c) in &self.components {
                acc += w;
                if u < acc {
                    chosen = c;
                    break;
                }
            }
            chosen
        };
        component.sample(rng)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoClassMixture {
    pi1: f64,
    class1: ClassDensity,
    class2: ClassDensity,
}

impl TwoClassMixture {
    pub fn new(pi1: f64, class1: ClassDensity, class2: ClassDensity) -> Result<Self> {
        if !(pi1 > 0.0 && pi1 < 1.0) {
            return Err(Error::InvalidParameter(format!("pi1 must lie in (0, 1), got {pi1}")));
        }
        Ok(TwoClassMixture { pi1, class1, class2 })
    }

    /// `π = (2/3, 1/3)`, `f₁ = ν(-1, 1)`, `f₂ = ν(1, 1)`.
    pub fn case1() -> Self {
        TwoClassMixture {
            pi1: 2.0 / 3.0,
            class1: ClassDensity::single(DistributionComponent::Gaussian { mu: -1.0, sigma: 1.0 }),
            class2: ClassDensity::single(DistributionComponent::Gaussian { mu: 1.0, sigma: 1.0 }),
        }
    }

    /// `π = (1/2, 1/2)`, `f₁ = ½ν(-1, 1) + ½ν(1, 1)`, `f₂ = 0.8ν(0, 1) + 0.2τ(0, 0.5)`.
    pub fn case2() -> Self {
        TwoClassMixture {
            pi1: 0.5,
            class1: ClassDensity {
                components: vec![
                    (0.5, DistributionComponent::Gaussian { mu: -1.0, sigma: 1.0 }),
                    (0.5, DistributionComponent::Gaussian { mu: 1.0, sigma: 1.0 }),
                ],
            },
            class2: ClassDensity {
                components: vec![
                    (0.8, DistributionComponent::Gaussian { mu: 0.0, sigma: 1.0 }),
                    (0.2, DistributionComponent::Triangular { a: 0.0, b: 0.5 }),
                ],
            },
        }
    }

    pub fn pi1(&self) -> f64 {
        self.pi1
    }

    pub fn pi2(&self) -> f64 {
        1.0 - self.pi1
    }

    pub fn priors(&self) -> [f64; 2] {
        [self.pi1, 1.0 - self.pi1]
    }

    pub fn class(&self, label: Label) -> &ClassDensity {
        match label {
            Label::First => &self.class1,
            Label::Second => &self.class2,
        }
    }

    /// `π_j f_j(x)`.
    pub fn weighted_pdf(&self, label: Label, x: f64) -> f64 {
        self.priors()[label.index()] * self.class(label).pdf(x)
    }

    /// `π₁f₁(x) − π₂f₂(x)`; its sign changes mark the crossover points.
    pub fn density_gap(&self, x: f64) -> f64 {
        self.weighted_pdf(Label::First, x) - self.weighted_pdf(Label::Second, x)
    }

    pub fn support_hint(&self) -> (f64, f64) {
        let (l1, h1) = self.class1.support_hint();
        let (l2, h2) = self.class2.support_hint();
        (l1.min(l2), h1.max(h2))
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, Label) {
        let label = if rng.random::<f64>() < self.pi1 { Label::First } else { Label::Second };
        (self.class(label).sample(rng), label)
    }

    /// Draws `n_samples` i.i.d. labeled points. Equal seeds give bit-identical
    /// sequences, and a shorter draw is a prefix of a longer one.
    pub fn sample_labeled(&self, n_samples: usize, seed: u64) -> Result<Vec<(f64, Label)>> {
        if n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n_samples).map(|_| self.sample_one(&mut rng)).collect())
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a path of
/// stream coordinates (trial index, sample size, protocol tag, ...).
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(master), |acc, &part| mix64(acc ^ mix64(part)))
}

//! Exact simulation of the asset and short-rate dynamics, used as an independent
//! check on the transform and quadrature prices.
//!
//! Sample `j` always draws from ChaCha8 stream `j` of the run seed, and samples are
//! reduced in fixed-size chunks in index order. Results are therefore bitwise
//! identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{ensure_finite, nonneg_param, require, Result};
use crate::jump_measure::GaussianJumpLaw;
use crate::option::{AssetModel, OptionKind, OptionTerms};
use crate::shortrate::{b_factor, BondTerms, BondVariant, RateModel};

/// Path count, seed and variance-reduction switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    paths: u64,
    seed: u64,
    antithetic: bool,
}

impl SimConfig {
    /// With `antithetic`, paths are generated in mirrored pairs and `paths` is
    /// rounded up to an even number.
    pub fn new(paths: u64, seed: u64, antithetic: bool) -> Result<Self> {
        require(paths >= 2, "paths", || format!("need at least 2 paths, got {paths}"))?;
        Ok(Self { paths, seed, antithetic })
    }

    pub fn paths(&self) -> u64 {
        self.paths
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn antithetic(&self) -> bool {
        self.antithetic
    }

    fn samples(&self) -> u64 {
        if self.antithetic {
            self.paths.div_ceil(2)
        } else {
            self.paths
        }
    }

    fn paths_per_sample(&self) -> u64 {
        if self.antithetic {
            2
        } else {
            1
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub paths_used: u64,
}

impl McEstimate {
    /// `(mean - reference) / std_error`.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.std_error
    }
}

/// Running central moments up to order four; chunks merge pairwise.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let n1 = self.n;
        self.n += 1.0;
        let n = self.n;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let term = delta * dn * n1;
        self.mean += dn;
        self.m4 += term * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += term * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term;
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let (na, nb) = (self.n, other.n);
        let n = na + nb;
        let d = other.mean - self.mean;
        let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
        Self {
            n,
            mean: self.mean + d * nb / n,
            m2: self.m2 + other.m2 + d2 * na * nb / n,
            m3: self.m3 + other.m3 + d3 * na * nb * (na - nb) / (n * n)
                + 3.0 * d * (na * other.m2 - nb * self.m2) / n,
            m4: self.m4 + other.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
                + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
                + 4.0 * d * (na * other.m3 - nb * self.m3) / n,
        }
    }

    fn sample_variance(&self) -> f64 {
        self.m2 / (self.n - 1.0)
    }

    fn estimate(&self, paths_used: u64) -> McEstimate {
        McEstimate {
            mean: self.mean,
            std_error: (self.sample_variance() / self.n).sqrt(),
            paths_used,
        }
    }

    /// Sample variance with the standard error implied by the fourth moment.
    fn variance_estimate(&self, paths_used: u64) -> McEstimate {
        let var = self.sample_variance();
        let mu4 = self.m4 / self.n;
        let spread = (mu4 - var * var * (self.n - 3.0) / (self.n - 1.0)).max(0.0);
        McEstimate { mean: var, std_error: (spread / self.n).sqrt(), paths_used }
    }
}

const CHUNK: u64 = 4096;

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `draw` once per sample and reduces with a deterministic chunk order.
fn simulate<const K: usize>(sim: &SimConfig, draw: impl Fn(&mut ChaCha8Rng) -> [f64; K] + Sync) -> [Moments; K] {
    let samples = sim.samples();
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<[Moments; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = [Moments::default(); K];
            for j in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = sample_rng(sim.seed, j);
                for (m, x) in acc.iter_mut().zip(draw(&mut rng)) {
                    m.push(x);
                }
            }
            acc
        })
        .collect();
    partial.into_iter().fold([Moments::default(); K], |mut total, part| {
        for (t, p) in total.iter_mut().zip(part) {
            *t = t.merge(p);
        }
        total
    })
}

fn poisson_count(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite Poisson mean");
    dist.sample(rng) as u64
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn jump_size(rng: &mut ChaCha8Rng, law: &GaussianJumpLaw) -> f64 {
    law.mean() + law.sd() * normal(rng)
}

/// Arrival times and sizes of the jumps of one path on `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePathSample {
    pub jump_times: Vec<f64>,
    pub jump_sizes: Vec<f64>,
}

impl RatePathSample {
    pub fn count(&self) -> usize {
        self.jump_times.len()
    }
}

/// Draws a compound Poisson path: Poisson count, uniform arrival times, Gaussian sizes.
pub fn sample_shot_noise<R: Rng + ?Sized>(
    rng: &mut R,
    lambda: f64,
    law: &GaussianJumpLaw,
    start: f64,
    end: f64,
) -> RatePathSample {
    let mean = lambda * (end - start);
    let n = if mean > 0.0 {
        Poisson::new(mean).expect("positive finite Poisson mean").sample(rng) as usize
    } else {
        0
    };
    let mut jump_times = Vec::with_capacity(n);
    let mut jump_sizes = Vec::with_capacity(n);
    for _ in 0..n {
        jump_times.push(start + (end - start) * rng.random::<f64>());
        let z: f64 = StandardNormal.sample(rng);
        jump_sizes.push(law.mean() + law.sd() * z);
    }
    RatePathSample { jump_times, jump_sizes }
}

/// Terminal log-price pieces: the deterministic part plus jumps, and the diffusive scale.
fn terminal_log_price(rng: &mut ChaCha8Rng, terms: &OptionTerms, model: &AssetModel) -> (f64, f64, f64) {
    let tau = terms.tau();
    let drift = (terms.rate() - terms.dividend() - model.lambda() * model.law().compensator()
        - 0.5 * model.sigma() * model.sigma())
        * tau;
    let n = poisson_count(rng, model.lambda() * tau);
    let jumps: f64 = (0..n).map(|_| jump_size(rng, model.law())).sum();
    let z = normal(rng);
    (terms.spot().ln() + drift + jumps, model.sigma() * tau.sqrt(), z)
}

fn option_sample(terms: &OptionTerms, model: &AssetModel, antithetic: bool, rng: &mut ChaCha8Rng) -> [f64; 2] {
    let discount = (-terms.rate() * terms.tau()).exp();
    let (base, scale, z) = terminal_log_price(rng, terms, model);
    let value = |z: f64| {
        let s = (base + scale * z).exp();
        let pay = match terms.kind() {
            OptionKind::Call => (s - terms.strike()).max(0.0),
            OptionKind::Put => (terms.strike() - s).max(0.0),
        };
        [discount * pay, discount * s]
    };
    if antithetic {
        let (a, b) = (value(z), value(-z));
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    } else {
        value(z)
    }
}

fn option_moments(terms: &OptionTerms, model: &AssetModel, sim: &SimConfig) -> [Moments; 2] {
    simulate(sim, |rng| option_sample(terms, model, sim.antithetic, rng))
}

/// Discounted payoff average.
pub fn mc_option_price(terms: &OptionTerms, model: &AssetModel, sim: &SimConfig) -> Result<McEstimate> {
    let [pay, _] = option_moments(terms, model, sim);
    let est = pay.estimate(sim.samples() * sim.paths_per_sample());
    ensure_finite(est.mean, "Monte Carlo option price")?;
    Ok(est)
}

/// Average of `e^{-r tau} S_T`; equals `S e^{-q tau}` for a correctly compensated drift.
pub fn mc_discounted_forward(terms: &OptionTerms, model: &AssetModel, sim: &SimConfig) -> Result<McEstimate> {
    let [_, fwd] = option_moments(terms, model, sim);
    let est = fwd.estimate(sim.samples() * sim.paths_per_sample());
    ensure_finite(est.mean, "Monte Carlo forward")?;
    Ok(est)
}

/// `E[exp(-int_t^T r ds)]` by exact sampling of the integrated short rate.
pub fn mc_bond_price(model: &RateModel, terms: &BondTerms, variant: BondVariant, sim: &SimConfig) -> Result<McEstimate> {
    let m = model.restrict(variant);
    let (t, maturity) = (terms.valuation_time(), terms.maturity());
    let tenor = terms.tenor();
    let a = m.mean_reversion();
    let b = b_factor(&m, t, maturity)?;
    let deterministic = terms.short_rate() * b + m.long_run() * (tenor - b);
    // Variance of sigma int_t^T B(s, T) dW_s.
    let gaussian_var = m.sigma() * m.sigma() / (a * a) * (tenor - b - 0.5 * a * b * b);
    let gaussian_sd = gaussian_var.max(0.0).sqrt();
    let [acc] = simulate(sim, |rng| {
        let path = sample_shot_noise(rng, m.lambda(), m.law(), t, maturity);
        let jumps: f64 = path
            .jump_times
            .iter()
            .zip(&path.jump_sizes)
            .map(|(&tk, &eta)| eta * -(-a * (maturity - tk)).exp_m1() / a)
            .sum();
        let z = normal(rng);
        let value = |z: f64| (-(deterministic + jumps + gaussian_sd * z)).exp();
        if sim.antithetic {
            [0.5 * (value(z) + value(-z))]
        } else {
            [value(z)]
        }
    });
    let est = acc.estimate(sim.samples() * sim.paths_per_sample());
    ensure_finite(est.mean, "Monte Carlo bond price")?;
    Ok(est)
}

/// Sampled mean and variance of the short rate after a horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateMomentEstimates {
    pub mean: McEstimate,
    pub variance: McEstimate,
}

/// Samples `r(t + h)` given `r(t)`. Antithetic pairing is not applied, since it
/// would bias the variance estimate.
pub fn mc_rate_moments(model: &RateModel, short_rate: f64, horizon: f64, sim: &SimConfig) -> Result<RateMomentEstimates> {
    nonneg_param("h", horizon)?;
    let plain = SimConfig { antithetic: false, ..*sim };
    let a = model.mean_reversion();
    let decay = (-a * horizon).exp();
    let base = decay * short_rate + model.long_run() * (1.0 - decay);
    let gaussian_sd = model.sigma() * (-(-2.0 * a * horizon).exp_m1() / (2.0 * a)).sqrt();
    let [acc] = simulate(&plain, |rng| {
        let path = sample_shot_noise(rng, model.lambda(), model.law(), 0.0, horizon);
        let jumps: f64 = path
            .jump_times
            .iter()
            .zip(&path.jump_sizes)
            .map(|(&u, &eta)| eta * (-a * (horizon - u)).exp())
            .sum();
        [base + gaussian_sd * normal(rng) + jumps]
    });
    Ok(RateMomentEstimates {
        mean: acc.estimate(plain.paths),
        variance: acc.variance_estimate(plain.paths),
    })
}

//! Distribution functions of the jump-diffusion transition law.
//!
//! Let `Y = -J - sigma sqrt(tau) Z` where `J` is a compound Poisson sum of Gaussian
//! jumps over the horizon. The option price needs four functions of the log-moneyness
//! variable `l`:
//!
//! * plain lower tail `P(Y <= l)` and its complement,
//! * tilted lower tail `e^{-(sigma^2/2 + lambda varsigma) tau} E[e^{-Y} 1{Y <= l}]`
//!   and its complement.
//!
//! The tilted law is again a Poisson mixture of Gaussians, with intensity scaled by
//! `1 + varsigma` and every component mean shifted down by its variance.
//!
//! Two backends evaluate them. `Series` sums the mixture term by term. `Fourier`
//! inverts the characteristic function with the Gil-Pelaez formula after removing
//! the point mass that exists when `sigma = 0`. Lower tails are right-continuous,
//! so the point mass at `l = 0` belongs to the lower tail.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{ensure_finite, nonneg_param, PricingError, Result};
use crate::jump_measure::{ArrivalRate, GaussianJumpLaw};
use crate::normal;
use crate::quadrature::{self, QuadratureSpec};

/// Evaluation route for the transition-law functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    #[default]
    Series,
    Fourier,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Series => "series",
            Backend::Fourier => "fourier",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = PricingError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Backend::Series),
            "fourier" => Ok(Backend::Fourier),
            other => Err(PricingError::invalid(
                "backend",
                format!("expected `series` or `fourier`, got `{other}`"),
            )),
        }
    }
}

/// Which of the two measures the distribution function is taken under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// The law of `Y` itself; enters the strike leg.
    Plain,
    /// The exponentially tilted law; enters the asset leg.
    Tilted,
}

/// Lower tail `Y <= l` or upper tail `Y > l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Lower,
    Upper,
}

/// Parameters of the transition law over one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharSpec {
    tau: f64,
    lambda: ArrivalRate,
    sigma: f64,
    law: GaussianJumpLaw,
}

impl CharSpec {
    pub fn new(tau: f64, lambda: ArrivalRate, sigma: f64, law: GaussianJumpLaw) -> Result<Self> {
        Ok(Self {
            tau: nonneg_param("tau", tau)?,
            lambda,
            sigma: nonneg_param("sigma", sigma)?,
            law,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn lambda(&self) -> f64 {
        self.lambda.get()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn law(&self) -> &GaussianJumpLaw {
        &self.law
    }

    /// `(sigma^2/2 + lambda varsigma) tau`, the exponent removed by the tilt.
    pub fn tilt_exponent(&self) -> f64 {
        (0.5 * self.sigma * self.sigma + self.lambda() * self.law.compensator()) * self.tau
    }

    /// Expected number of jumps under `measure`.
    pub fn jump_count_mean(&self, measure: Measure) -> f64 {
        let base = self.lambda() * self.tau;
        match measure {
            Measure::Plain => base,
            Measure::Tilted => base * (1.0 + self.law.compensator()),
        }
    }

    /// `sigma^2 tau`.
    pub fn diffusive_variance(&self) -> f64 {
        self.sigma * self.sigma * self.tau
    }

    /// Standard deviation of `Y`; the scale on which the law concentrates.
    pub fn spread(&self) -> f64 {
        (self.lambda() * self.tau * self.law.second_moment() + self.diffusive_variance()).sqrt()
    }

    /// Mass of the point at `Y = 0` under `measure`; zero when `sigma > 0`.
    pub fn atom_weight(&self, measure: Measure) -> f64 {
        if self.sigma > 0.0 {
            0.0
        } else {
            (-self.jump_count_mean(measure)).exp()
        }
    }

    fn log_char(&self, k: Complex64) -> Complex64 {
        (-0.5 * self.sigma * self.sigma * k * k + self.lambda() * self.law.transform(k)) * self.tau
    }

    /// `psi(k) = exp{[-sigma^2 k^2 / 2 + lambda xi(k)] tau}`, the characteristic
    /// function of `Y` in the convention `f(z) = (1/2pi) int e^{ikz} psi(k) dk`.
    pub fn char_function(&self, k: Complex64) -> Complex64 {
        self.log_char(k).exp()
    }

    /// Characteristic function under `measure`.
    pub fn measure_char(&self, measure: Measure, k: Complex64) -> Complex64 {
        match measure {
            Measure::Plain => self.char_function(k),
            Measure::Tilted => {
                (self.log_char(k - Complex64::i()) - self.tilt_exponent()).exp()
            }
        }
    }
}

/// A distribution-function value with its truncation error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValue {
    pub value: f64,
    pub est_error: f64,
}

/// Poisson probabilities `P(N = n)`, truncated where the remaining tail is below target.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonWeights {
    pub weights: Vec<f64>,
    /// Upper bound on the omitted mass.
    pub tail: f64,
}

/// Poisson weights with mean `mean`, built in log space so that large means do not
/// underflow the leading terms.
pub fn poisson_weights(mean: f64, quad: &QuadratureSpec) -> Result<PoissonWeights> {
    nonneg_param("poisson mean", mean)?;
    if mean == 0.0 {
        return Ok(PoissonWeights { weights: vec![1.0], tail: 0.0 });
    }
    let target = quad.tail_target();
    let log_mean = mean.ln();
    let mut log_w = -mean;
    let mut weights = vec![log_w.exp()];
    loop {
        let n = weights.len();
        let next = log_w + log_mean - (n as f64).ln();
        let ratio = mean / (n as f64 + 1.0);
        let bound = if ratio < 1.0 {
            next.exp() / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if bound < target {
            return Ok(PoissonWeights { weights, tail: bound });
        }
        if n >= quad.n_max {
            let tail = if bound.is_finite() {
                bound
            } else {
                (1.0 - weights.iter().sum::<f64>()).max(0.0)
            };
            return Err(PricingError::SeriesTruncation { terms: n, tail });
        }
        weights.push(next.exp());
        log_w = next;
    }
}

/// One Gaussian component `N(mean, sd^2)` of a mixture; `sd = 0` is a point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Component {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

impl Component {
    pub fn lower(&self, l: f64) -> f64 {
        if self.sd > 0.0 {
            normal::cdf((l - self.mean) / self.sd)
        } else if l >= self.mean {
            1.0
        } else {
            0.0
        }
    }

    pub fn upper(&self, l: f64) -> f64 {
        if self.sd > 0.0 {
            normal::cdf((self.mean - l) / self.sd)
        } else if l < self.mean {
            1.0
        } else {
            0.0
        }
    }

    pub fn tail(&self, tail: Tail, l: f64) -> f64 {
        match tail {
            Tail::Lower => self.lower(l),
            Tail::Upper => self.upper(l),
        }
    }

    pub fn density(&self, l: f64) -> f64 {
        if self.sd > 0.0 {
            normal::gaussian_pdf(l, self.mean, self.sd)
        } else {
            0.0
        }
    }

    pub fn density_slope(&self, l: f64) -> f64 {
        if self.sd > 0.0 {
            -(l - self.mean) / (self.sd * self.sd) * self.density(l)
        } else {
            0.0
        }
    }
}

/// Poisson mixture of Gaussians representing `Y` under one measure.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mixture {
    pub components: Vec<Component>,
    pub tail: f64,
    /// Mean and standard deviation of the component with one more jump than the last
    /// retained one, so that shifted sums `sum_n w_n F_{n+1}` can be formed.
    pub next: Component,
}

impl Mixture {
    fn build(spec: &CharSpec, measure: Measure, quad: &QuadratureSpec) -> Result<Self> {
        let poisson = poisson_weights(spec.jump_count_mean(measure), quad)?;
        let component = |n: usize, weight: f64| {
            let var = n as f64 * spec.law.sd() * spec.law.sd() + spec.diffusive_variance();
            let mut mean = -(n as f64) * spec.law.mean();
            if measure == Measure::Tilted {
                mean -= var;
            }
            Component { weight, mean, sd: var.sqrt() }
        };
        let components: Vec<Component> = poisson
            .weights
            .iter()
            .enumerate()
            .map(|(n, &w)| component(n, w))
            .collect();
        let next = component(components.len(), 0.0);
        Ok(Self { components, tail: poisson.tail, next })
    }

    /// Component with index `n`, weights ignored beyond the retained range.
    pub fn shape(&self, n: usize) -> Component {
        if n < self.components.len() {
            self.components[n]
        } else {
            self.next
        }
    }

    pub fn cdf(&self, tail: Tail, l: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.tail(tail, l)).sum()
    }

    pub fn density(&self, l: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.density(l)).sum()
    }

    pub fn density_slope(&self, l: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.density_slope(l)).sum()
    }

    /// Total weight of point-mass components located at `l`.
    pub fn atom_at(&self, l: f64) -> f64 {
        let eps = 1e-12 * (1.0 + l.abs());
        self.components
            .iter()
            .filter(|c| c.sd == 0.0 && (c.mean - l).abs() <= eps)
            .map(|c| c.weight)
            .sum()
    }
}

/// Term-by-term mixtures for both measures, built once per parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub(crate) plain: Mixture,
    pub(crate) tilted: Mixture,
}

impl SeriesExpansion {
    pub fn new(spec: &CharSpec, quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        Ok(Self {
            plain: Mixture::build(spec, Measure::Plain, quad)?,
            tilted: Mixture::build(spec, Measure::Tilted, quad)?,
        })
    }

    pub(crate) fn mixture(&self, measure: Measure) -> &Mixture {
        match measure {
            Measure::Plain => &self.plain,
            Measure::Tilted => &self.tilted,
        }
    }

    pub fn cdf(&self, measure: Measure, tail: Tail, l: f64) -> LValue {
        let m = self.mixture(measure);
        LValue { value: m.cdf(tail, l), est_error: m.tail }
    }

    /// Density of `Y` under `measure` at `l`, excluding point masses.
    pub fn density(&self, measure: Measure, l: f64) -> f64 {
        self.mixture(measure).density(l)
    }

    /// Derivative of [`SeriesExpansion::density`] in `l`.
    pub fn density_slope(&self, measure: Measure, l: f64) -> f64 {
        self.mixture(measure).density_slope(l)
    }

    /// Weight of a point mass at `l` under `measure`, zero if there is none.
    pub fn atom_at(&self, measure: Measure, l: f64) -> f64 {
        self.mixture(measure).atom_at(l)
    }

    /// Number of retained Poisson terms under `measure`.
    pub fn terms(&self, measure: Measure) -> usize {
        self.mixture(measure).components.len()
    }
}

/// Gil-Pelaez inversion of the characteristic function under one measure.
#[derive(Debug, Clone, Copy)]
struct FourierInversion {
    spec: CharSpec,
    measure: Measure,
    atom: f64,
    jump_count: f64,
}

impl FourierInversion {
    fn new(spec: &CharSpec, measure: Measure) -> Self {
        Self {
            spec: *spec,
            measure,
            atom: spec.atom_weight(measure),
            jump_count: spec.jump_count_mean(measure),
        }
    }

    /// Characteristic function with the point mass removed.
    fn remainder(&self, k: f64) -> Complex64 {
        self.spec.measure_char(self.measure, Complex64::new(k, 0.0)) - self.atom
    }

    /// Bound on `(1/pi) int_K^inf |remainder(k)| k^{-power} dk`, from
    /// `|remainder| <= e^{-s k^2/2} (a0 + M e^{-d k^2/2})`.
    fn tail_bound(&self, cutoff: f64, power: i32) -> f64 {
        let s = self.spec.diffusive_variance();
        let d = self.spec.law.sd().powi(2);
        let a0 = if self.spec.sigma > 0.0 { (-self.jump_count).exp() } else { 0.0 };
        let term = |coef: f64, rate: f64| {
            if coef == 0.0 {
                0.0
            } else if rate == 0.0 {
                f64::INFINITY
            } else {
                coef * (-0.5 * rate * cutoff * cutoff).exp() / (rate * cutoff)
            }
        };
        (term(a0, s) + term(self.jump_count, s + d)) / (PI * cutoff.powi(power))
    }

    fn initial_cutoff(&self, target: f64) -> f64 {
        let s = self.spec.diffusive_variance();
        let d = self.spec.law.sd().powi(2);
        let rate = if self.spec.sigma > 0.0 { s } else { s + d };
        if rate == 0.0 {
            return 1.0;
        }
        let scale = (1.0 + self.jump_count).max(1.0);
        (2.0 * (scale / target).ln() / rate).sqrt().max(1.0)
    }

    /// Chooses the frequency cutoff, doubling up to four times until the tail bound
    /// meets `target`.
    fn cutoff(&self, quad: &QuadratureSpec, power: i32) -> Result<(f64, f64)> {
        let target = quad.tail_target();
        let mut k = quad.k_max.unwrap_or_else(|| self.initial_cutoff(target));
        let mut bound = self.tail_bound(k, power);
        for _ in 0..4 {
            if bound < target {
                break;
            }
            k *= 2.0;
            bound = self.tail_bound(k, power);
        }
        if bound < target {
            Ok((k, bound))
        } else {
            Err(PricingError::ToleranceNotMet {
                backend: Backend::Fourier.name(),
                target,
                achieved: bound,
            })
        }
    }

    fn panel_width(&self, l: f64) -> f64 {
        let law = &self.spec.law;
        let drift = self.jump_count * (law.mean().abs() + law.sd().powi(2)) + self.spec.diffusive_variance();
        let rate = 1.0 + l.abs() + drift + self.spec.spread();
        (1.0 / rate).min(0.5)
    }

    fn integrate(&self, cutoff: f64, l: f64, nodes: usize, g: impl Fn(f64, Complex64) -> f64) -> f64 {
        let rule = quadrature::legendre(nodes);
        let width = self.panel_width(l);
        let panels = (cutoff / width).ceil().max(1.0) as usize;
        let h = cutoff / panels as f64;
        (0..panels)
            .map(|p| {
                let a = h * p as f64;
                quadrature::apply(&rule, a, a + h, |k| {
                    let phase = Complex64::new(0.0, k * l).exp();
                    g(k, phase * self.remainder(k))
                })
            })
            .sum()
    }

    fn cdf(&self, tail: Tail, l: f64, quad: &QuadratureSpec) -> Result<LValue> {
        let continuous = 1.0 - self.atom;
        let (integral, err) = if continuous <= 0.0 {
            (0.0, 0.0)
        } else {
            let (cutoff, bound) = self.cutoff(quad, 1)?;
            let i = self.integrate(cutoff, l, quad.k_nodes, |k, z| z.im / k) / PI;
            (i, bound)
        };
        let value = match tail {
            Tail::Lower => {
                let atom = if l >= 0.0 { self.atom } else { 0.0 };
                atom + 0.5 * continuous + integral
            }
            Tail::Upper => {
                let atom = if l < 0.0 { self.atom } else { 0.0 };
                atom + 0.5 * continuous - integral
            }
        };
        Ok(LValue { value: ensure_finite(value, "Fourier inversion")?, est_error: err })
    }

    fn density(&self, u: f64, quad: &QuadratureSpec) -> Result<LValue> {
        if self.atom >= 1.0 {
            return Ok(LValue { value: 0.0, est_error: 0.0 });
        }
        let (cutoff, bound) = self.cutoff(quad, 0)?;
        let value = self.integrate(cutoff, u, quad.k_nodes, |_, z| z.re) / PI;
        Ok(LValue { value: ensure_finite(value, "Fourier density")?, est_error: bound })
    }
}

/// Evaluates one transition-law distribution function.
pub fn transition_cdf(
    spec: &CharSpec,
    measure: Measure,
    tail: Tail,
    l: f64,
    backend: Backend,
    quad: &QuadratureSpec,
) -> Result<LValue> {
    quad.validate()?;
    crate::error::finite_param("l", l)?;
    match backend {
        Backend::Series => Ok(SeriesExpansion::new(spec, quad)?.cdf(measure, tail, l)),
        Backend::Fourier => FourierInversion::new(spec, measure).cdf(tail, l, quad),
    }
}

/// `P(Y <= l)`.
pub fn cdf_plain(spec: &CharSpec, l: f64, backend: Backend, quad: &QuadratureSpec) -> Result<LValue> {
    transition_cdf(spec, Measure::Plain, Tail::Lower, l, backend, quad)
}

/// `e^{-(sigma^2/2 + lambda varsigma) tau} E[e^{-Y} 1{Y <= l}]`.
pub fn cdf_tilted(spec: &CharSpec, l: f64, backend: Backend, quad: &QuadratureSpec) -> Result<LValue> {
    transition_cdf(spec, Measure::Tilted, Tail::Lower, l, backend, quad)
}

/// `P(Y > l)`, computed directly rather than as `1 - cdf_plain`.
pub fn ccdf_plain(spec: &CharSpec, l: f64, backend: Backend, quad: &QuadratureSpec) -> Result<LValue> {
    transition_cdf(spec, Measure::Plain, Tail::Upper, l, backend, quad)
}

/// Tilted upper tail, computed directly.
pub fn ccdf_tilted(spec: &CharSpec, l: f64, backend: Backend, quad: &QuadratureSpec) -> Result<LValue> {
    transition_cdf(spec, Measure::Tilted, Tail::Upper, l, backend, quad)
}

/// Evaluator that keeps per-parameter-set work (the Poisson mixtures) between calls.
#[derive(Debug, Clone)]
pub struct TransitionLaw {
    spec: CharSpec,
    backend: Backend,
    quad: QuadratureSpec,
    series: Option<SeriesExpansion>,
}

impl TransitionLaw {
    pub fn new(spec: &CharSpec, backend: Backend, quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        let series = match backend {
            Backend::Series => Some(SeriesExpansion::new(spec, quad)?),
            Backend::Fourier => None,
        };
        Ok(Self { spec: *spec, backend, quad: *quad, series })
    }

    pub fn spec(&self) -> &CharSpec {
        &self.spec
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn cdf(&self, measure: Measure, tail: Tail, l: f64) -> Result<LValue> {
        match &self.series {
            Some(series) => Ok(series.cdf(measure, tail, l)),
            None => FourierInversion::new(&self.spec, measure).cdf(tail, l, &self.quad),
        }
    }
}

/// Where the transition density is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreenArgument {
    /// The drift-adjusted displacement `u` directly.
    Shifted(f64),
    /// Log-price displacement `x - x'` plus the carry `r - q`; the compensated drift
    /// is added internally.
    Raw { displacement: f64, carry: f64 },
}

/// Discounted transition kernel: an absolutely continuous density plus the weight
/// of a point mass sitting exactly at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub density: f64,
    pub atom: f64,
    pub est_error: f64,
}

/// `e^{-r tau}` times the density of `Y` at the drift-adjusted displacement.
pub fn green_density(
    spec: &CharSpec,
    argument: GreenArgument,
    rate: f64,
    backend: Backend,
    quad: &QuadratureSpec,
) -> Result<GreenKernel> {
    quad.validate()?;
    let u = match argument {
        GreenArgument::Shifted(u) => u,
        GreenArgument::Raw { displacement, carry } => {
            displacement
                + (carry - spec.lambda() * spec.law.compensator() - 0.5 * spec.sigma * spec.sigma)
                    * spec.tau
        }
    };
    crate::error::finite_param("u", u)?;
    let discount = (-rate * spec.tau).exp();
    let series = SeriesExpansion::new(spec, quad)?;
    let atom = discount * series.atom_at(Measure::Plain, u);
    let (density, est_error) = match backend {
        Backend::Series => (series.density(Measure::Plain, u), series.plain.tail),
        Backend::Fourier => {
            let v = FourierInversion::new(spec, Measure::Plain).density(u, quad)?;
            (v.value, v.est_error)
        }
    };
    Ok(GreenKernel { density: discount * density, atom, est_error: discount * est_error })
}

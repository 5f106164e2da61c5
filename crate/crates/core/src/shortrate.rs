//! Zero-coupon bonds under a mean-reverting short rate with shot-noise jumps.
//!
//! `dr = a (b - r) dt + sigma_r dW + dJ`, where `J` is a compound Poisson process of
//! Gaussian jumps. Bond prices are exponential-affine, `P = exp(A - B r)`, with
//! `B = (1 - e^{-a tau}) / a`. The jump part of `A` is a one-dimensional integral
//! over the remaining life of the bond.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_finite, finite_param, nonneg_param, positive_param, require, PricingError, Result};
use crate::greeks::fd_sensitivity;
use crate::jump_measure::{ArrivalRate, GaussianJumpLaw};
use crate::quadrature::{adaptive_legendre, QuadratureSpec};

/// Which parts of the rate dynamics are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondVariant {
    /// Jumps and mean reversion only: `b = 0`, `sigma_r = 0`.
    Shot,
    /// Gaussian rate without jumps.
    Vasicek,
    /// Everything switched on.
    General,
}

impl BondVariant {
    pub const ALL: [BondVariant; 3] = [BondVariant::Shot, BondVariant::Vasicek, BondVariant::General];

    pub fn name(self) -> &'static str {
        match self {
            BondVariant::Shot => "shot",
            BondVariant::Vasicek => "vasicek",
            BondVariant::General => "general",
        }
    }
}

impl fmt::Display for BondVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BondVariant {
    type Err = PricingError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shot" => Ok(BondVariant::Shot),
            "vasicek" => Ok(BondVariant::Vasicek),
            "general" => Ok(BondVariant::General),
            other => Err(PricingError::invalid(
                "variant",
                format!("expected `shot`, `vasicek` or `general`, got `{other}`"),
            )),
        }
    }
}

/// Short-rate dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    mean_reversion: f64,
    long_run: f64,
    sigma: f64,
    lambda: ArrivalRate,
    law: GaussianJumpLaw,
}

impl RateModel {
    pub fn new(mean_reversion: f64, long_run: f64, sigma: f64, lambda: f64, nu: f64, delta: f64) -> Result<Self> {
        Ok(Self {
            mean_reversion: positive_param("a", mean_reversion)?,
            long_run: finite_param("b", long_run)?,
            sigma: nonneg_param("sigma_r", sigma)?,
            lambda: ArrivalRate::new(lambda)?,
            law: GaussianJumpLaw::new(nu, delta)?,
        })
    }

    pub fn mean_reversion(&self) -> f64 {
        self.mean_reversion
    }
    pub fn long_run(&self) -> f64 {
        self.long_run
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn lambda(&self) -> f64 {
        self.lambda.get()
    }
    pub fn law(&self) -> &GaussianJumpLaw {
        &self.law
    }

    /// Switches off the parts of the dynamics that `variant` excludes.
    pub fn restrict(&self, variant: BondVariant) -> Self {
        let mut m = *self;
        match variant {
            BondVariant::Shot => {
                m.long_run = 0.0;
                m.sigma = 0.0;
            }
            BondVariant::Vasicek => m.lambda = ArrivalRate::new(0.0).expect("zero rate"),
            BondVariant::General => {}
        }
        m
    }

    /// Jump-free model with the same conditional mean and variance:
    /// `b + lambda nu / a` and `sigma_r^2 + lambda (nu^2 + delta^2)`.
    pub fn diffusion_equivalent(&self) -> Self {
        let lam = self.lambda();
        Self {
            mean_reversion: self.mean_reversion,
            long_run: self.long_run + lam * self.law.mean() / self.mean_reversion,
            sigma: (self.sigma * self.sigma + lam * self.law.second_moment()).sqrt(),
            lambda: ArrivalRate::new(0.0).expect("zero rate"),
            law: self.law,
        }
    }
}

/// Valuation time, maturity and current short rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondTerms {
    valuation_time: f64,
    maturity: f64,
    short_rate: f64,
}

impl BondTerms {
    pub fn new(valuation_time: f64, maturity: f64, short_rate: f64) -> Result<Self> {
        finite_param("t", valuation_time)?;
        finite_param("T", maturity)?;
        require(maturity >= valuation_time, "T", || {
            format!("maturity {maturity} precedes valuation time {valuation_time}")
        })?;
        Ok(Self { valuation_time, maturity, short_rate: finite_param("r_t", short_rate)? })
    }

    pub fn valuation_time(&self) -> f64 {
        self.valuation_time
    }
    pub fn maturity(&self) -> f64 {
        self.maturity
    }
    pub fn short_rate(&self) -> f64 {
        self.short_rate
    }
    pub fn tenor(&self) -> f64 {
        self.maturity - self.valuation_time
    }
}

/// Price together with its exponential-affine coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondPrice {
    pub value: f64,
    pub a_term: f64,
    pub b_term: f64,
}

fn check_horizon(t: f64, maturity: f64) -> Result<f64> {
    finite_param("t", t)?;
    finite_param("T", maturity)?;
    require(maturity >= t, "T", || format!("maturity {maturity} precedes valuation time {t}"))?;
    Ok(maturity - t)
}

fn b_of_tenor(a: f64, tenor: f64) -> f64 {
    -(-a * tenor).exp_m1() / a
}

/// `B(t, T) = (1 - e^{-a (T - t)}) / a`.
pub fn b_factor(model: &RateModel, t: f64, maturity: f64) -> Result<f64> {
    Ok(b_of_tenor(model.mean_reversion, check_horizon(t, maturity)?))
}

/// Accuracy used for the jump integral; never looser than `1e-12`.
fn integral_tolerance(quad: &QuadratureSpec) -> f64 {
    quad.rel_tol.min(1e-12)
}

/// `E[e^{-eta y}] - 1` without cancellation at small `y`.
fn laplace_excess(law: &GaussianJumpLaw, y: f64) -> f64 {
    (-law.mean() * y + 0.5 * law.sd() * law.sd() * y * y).exp_m1()
}

/// Jump contribution `lambda int_t^T (E[exp(-eta B(s, T))] - 1) ds`.
pub fn a_shot(model: &RateModel, t: f64, maturity: f64, quad: &QuadratureSpec) -> Result<f64> {
    let tenor = check_horizon(t, maturity)?;
    if model.lambda() == 0.0 || tenor == 0.0 {
        return Ok(0.0);
    }
    let a = model.mean_reversion;
    // Integrate over the remaining life u = T - s.
    let integral = adaptive_legendre(0.0, tenor, integral_tolerance(quad), |u| {
        laplace_excess(&model.law, b_of_tenor(a, u))
    })?;
    ensure_finite(model.lambda() * integral, "jump part of A")
}

/// The same jump contribution after substituting `y = B(s, T)`:
/// `lambda int_0^{B(t,T)} (E[e^{-eta y}] - 1) / (1 - a y) dy`.
pub fn a_shot_substituted(model: &RateModel, t: f64, maturity: f64, quad: &QuadratureSpec) -> Result<f64> {
    let tenor = check_horizon(t, maturity)?;
    if model.lambda() == 0.0 || tenor == 0.0 {
        return Ok(0.0);
    }
    let a = model.mean_reversion;
    let upper = b_of_tenor(a, tenor);
    // Integrate in the distance w = B - y from the upper limit, where
    // 1 - a y = e^{-a tau} + a w is free of cancellation.
    let floor = (-a * tenor).exp();
    let integral = adaptive_legendre(0.0, upper, integral_tolerance(quad), |w| {
        laplace_excess(&model.law, upper - w) / (floor + a * w)
    })?;
    ensure_finite(model.lambda() * integral, "jump part of A")
}

/// Gaussian contribution `(b - sigma^2/(2a^2)) (B - tau) - sigma^2 B^2 / (4a)`.
pub fn a_vasicek(model: &RateModel, t: f64, maturity: f64) -> Result<f64> {
    let tenor = check_horizon(t, maturity)?;
    let a = model.mean_reversion;
    let b = b_of_tenor(a, tenor);
    let s2 = model.sigma * model.sigma;
    Ok((model.long_run - s2 / (2.0 * a * a)) * (b - tenor) - s2 * b * b / (4.0 * a))
}

/// Full `A(t, T)`: Gaussian plus jump contribution.
pub fn a_general(model: &RateModel, t: f64, maturity: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(a_vasicek(model, t, maturity)? + a_shot(model, t, maturity, quad)?)
}

/// Zero-coupon bond price for `variant` of the model.
pub fn bond_price(model: &RateModel, terms: &BondTerms, variant: BondVariant, quad: &QuadratureSpec) -> Result<BondPrice> {
    quad.validate()?;
    let m = model.restrict(variant);
    let (t, maturity) = (terms.valuation_time, terms.maturity);
    let a_term = a_general(&m, t, maturity, quad)?;
    let b_term = b_factor(&m, t, maturity)?;
    let value = ensure_finite((a_term - b_term * terms.short_rate).exp(), "bond price")?;
    Ok(BondPrice { value, a_term, b_term })
}

/// Continuously compounded yield `-ln(P) / tenor`.
pub fn zero_yield(price: f64, tenor: f64) -> Result<f64> {
    positive_param("price", price)?;
    positive_param("tenor", tenor)?;
    Ok(-price.ln() / tenor)
}

/// Mean and variance of `r(t + h)` given `r(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Conditional moments of the short rate over a horizon `h`.
pub fn conditional_moments(model: &RateModel, short_rate: f64, horizon: f64) -> Result<RateMoments> {
    finite_param("r_t", short_rate)?;
    nonneg_param("h", horizon)?;
    let eq = model.diffusion_equivalent();
    let a = model.mean_reversion;
    let decay = (-a * horizon).exp();
    Ok(RateMoments {
        mean: eq.long_run + (short_rate - eq.long_run) * decay,
        variance: eq.sigma * eq.sigma * -(-2.0 * a * horizon).exp_m1() / (2.0 * a),
    })
}

/// Largest absolute residuals of the coefficient equations over interior times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    /// `dA/dt - a b B + sigma^2 B^2 / 2 + lambda (E[e^{-eta B}] - 1)`.
    pub a_equation: f64,
    /// `dB/dt - a B + 1`.
    pub b_equation: f64,
    pub points: usize,
}

/// Checks that the computed `A` and `B` solve their ordinary differential equations in `t`.
pub fn ode_residual(
    model: &RateModel,
    t: f64,
    maturity: f64,
    variant: BondVariant,
    quad: &QuadratureSpec,
) -> Result<OdeResidual> {
    let tenor = check_horizon(t, maturity)?;
    require(tenor > 0.0, "T", || "needs a positive tenor".into())?;
    let m = model.restrict(variant);
    let a = m.mean_reversion;
    const POINTS: usize = 7;
    // Stays inside (t, T) for short tenors.
    let step = 1e-4_f64.min(tenor / 16.0);
    let mut out = OdeResidual { a_equation: 0.0, b_equation: 0.0, points: POINTS };
    for i in 1..=POINTS {
        let s = t + tenor * i as f64 / (POINTS + 1) as f64;
        let b = b_factor(&m, s, maturity)?;
        let da = fd_sensitivity(|x| a_general(&m, x, maturity, quad), s, step)?.value;
        let db = fd_sensitivity(|x| b_factor(&m, x, maturity), s, step)?.value;
        let source = -a * m.long_run * b + 0.5 * m.sigma * m.sigma * b * b + m.lambda() * laplace_excess(&m.law, b);
        out.a_equation = out.a_equation.max((da + source).abs());
        out.b_equation = out.b_equation.max((db - a * b + 1.0).abs());
    }
    Ok(out)
}

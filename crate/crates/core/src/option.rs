//! European option prices under jump-diffusion and pure shot-noise dynamics.
//!
//! Calls use the lower tails of the transition law, puts use the complements
//! computed independently, so put-call parity is a genuine check.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_finite, finite_param, nonneg_param, positive_param, PricingError, Result};
use crate::jump_measure::{ArrivalRate, GaussianJumpLaw};
use crate::normal;
use crate::quadrature::QuadratureSpec;
use crate::transform::{Backend, CharSpec, Measure, Tail, TransitionLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Call,
    Put,
}

impl OptionKind {
    pub fn name(self) -> &'static str {
        match self {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        }
    }

    pub(crate) fn tail(self) -> Tail {
        match self {
            OptionKind::Call => Tail::Lower,
            OptionKind::Put => Tail::Upper,
        }
    }
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptionKind {
    type Err = PricingError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "call" => Ok(OptionKind::Call),
            "put" => Ok(OptionKind::Put),
            other => Err(PricingError::invalid(
                "kind",
                format!("expected `call` or `put`, got `{other}`"),
            )),
        }
    }
}

/// Contract and market data for one European option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionTerms {
    spot: f64,
    strike: f64,
    tau: f64,
    rate: f64,
    dividend: f64,
    kind: OptionKind,
}

impl OptionTerms {
    pub fn new(spot: f64, strike: f64, tau: f64, rate: f64, dividend: f64, kind: OptionKind) -> Result<Self> {
        Ok(Self {
            spot: positive_param("spot", spot)?,
            strike: positive_param("strike", strike)?,
            tau: nonneg_param("tau", tau)?,
            rate: finite_param("rate", rate)?,
            dividend: finite_param("dividend", dividend)?,
            kind,
        })
    }

    pub fn spot(&self) -> f64 {
        self.spot
    }
    pub fn strike(&self) -> f64 {
        self.strike
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn rate(&self) -> f64 {
        self.rate
    }
    pub fn dividend(&self) -> f64 {
        self.dividend
    }
    pub fn kind(&self) -> OptionKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: OptionKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_spot(self, spot: f64) -> Result<Self> {
        Self::new(spot, self.strike, self.tau, self.rate, self.dividend, self.kind)
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, tau, self.rate, self.dividend, self.kind)
    }

    pub fn with_rate(self, rate: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, self.tau, rate, self.dividend, self.kind)
    }

    pub fn with_dividend(self, dividend: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, self.tau, self.rate, dividend, self.kind)
    }

    /// `S e^{-q tau}`.
    pub fn discounted_spot(&self) -> f64 {
        self.spot * (-self.dividend * self.tau).exp()
    }

    /// `K e^{-r tau}`.
    pub fn discounted_strike(&self) -> f64 {
        self.strike * (-self.rate * self.tau).exp()
    }
}

/// Asset dynamics: Gaussian jumps at rate `lambda`, plus an optional diffusion `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssetModel {
    lambda: ArrivalRate,
    law: GaussianJumpLaw,
    sigma: f64,
}

impl AssetModel {
    pub fn new(lambda: f64, nu: f64, delta: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            lambda: ArrivalRate::new(lambda)?,
            law: GaussianJumpLaw::new(nu, delta)?,
            sigma: nonneg_param("sigma", sigma)?,
        })
    }

    /// Pure shot-noise dynamics without a diffusion component.
    pub fn pure_jump(lambda: f64, nu: f64, delta: f64) -> Result<Self> {
        Self::new(lambda, nu, delta, 0.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda.get()
    }
    pub fn nu(&self) -> f64 {
        self.law.mean()
    }
    pub fn delta(&self) -> f64 {
        self.law.sd()
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn law(&self) -> &GaussianJumpLaw {
        &self.law
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.nu(), self.delta(), self.sigma)
    }
    pub fn with_nu(self, nu: f64) -> Result<Self> {
        Self::new(self.lambda(), nu, self.delta(), self.sigma)
    }
    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.lambda(), self.nu(), delta, self.sigma)
    }
    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(self.lambda(), self.nu(), self.delta(), sigma)
    }

    pub fn char_spec(&self, tau: f64) -> Result<CharSpec> {
        CharSpec::new(tau, self.lambda, self.sigma, self.law)
    }
}

/// A price together with the moneyness variable and backend that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceResult {
    pub value: f64,
    pub l_used: f64,
    pub backend: Backend,
    pub est_error: f64,
}

/// `ln(S/K)`.
pub fn log_moneyness(terms: &OptionTerms) -> f64 {
    (terms.spot / terms.strike).ln()
}

/// `l = ln(S/K) + (r - q - sigma^2/2 - lambda varsigma) tau`, the point at which the
/// transition-law tails are evaluated.
pub fn l_parameter(terms: &OptionTerms, model: &AssetModel) -> f64 {
    let drift = terms.rate - terms.dividend
        - 0.5 * model.sigma * model.sigma
        - model.lambda() * model.law.compensator();
    log_moneyness(terms) + drift * terms.tau
}

/// Intrinsic value.
pub fn payoff(terms: &OptionTerms) -> f64 {
    match terms.kind {
        OptionKind::Call => (terms.spot - terms.strike).max(0.0),
        OptionKind::Put => (terms.strike - terms.spot).max(0.0),
    }
}

/// The two transition-law tails a price needs, for the tail matching `kind`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PriceLegs {
    pub tilted: f64,
    pub plain: f64,
    pub est_error: f64,
}

pub(crate) fn price_legs(law: &TransitionLaw, kind: OptionKind, l: f64) -> Result<PriceLegs> {
    let tilted = law.cdf(Measure::Tilted, kind.tail(), l)?;
    let plain = law.cdf(Measure::Plain, kind.tail(), l)?;
    Ok(PriceLegs {
        tilted: tilted.value,
        plain: plain.value,
        est_error: tilted.est_error + plain.est_error,
    })
}

pub(crate) fn combine(terms: &OptionTerms, legs: &PriceLegs) -> f64 {
    let (s, k) = (terms.discounted_spot(), terms.discounted_strike());
    match terms.kind {
        OptionKind::Call => s * legs.tilted - k * legs.plain,
        OptionKind::Put => k * legs.plain - s * legs.tilted,
    }
}

/// Prices a European option with the chosen backend.
pub fn price(terms: &OptionTerms, model: &AssetModel, backend: Backend, quad: &QuadratureSpec) -> Result<PriceResult> {
    let l = l_parameter(terms, model);
    if terms.tau == 0.0 {
        return Ok(PriceResult { value: payoff(terms), l_used: l, backend, est_error: 0.0 });
    }
    let law = TransitionLaw::new(&model.char_spec(terms.tau)?, backend, quad)?;
    let legs = price_legs(&law, terms.kind, l)?;
    let value = ensure_finite(combine(terms, &legs), "option price")?;
    let scale = terms.discounted_spot().max(terms.discounted_strike());
    Ok(PriceResult {
        value: value.max(0.0),
        l_used: l,
        backend,
        est_error: scale * legs.est_error,
    })
}

/// Black–Scholes price with volatility `sigma`.
pub fn bs_price(terms: &OptionTerms, sigma: f64) -> Result<PriceResult> {
    nonneg_param("sigma", sigma)?;
    let model = AssetModel::new(0.0, 0.0, 0.0, sigma)?;
    let l = l_parameter(terms, &model);
    if terms.tau == 0.0 {
        return Ok(PriceResult { value: payoff(terms), l_used: l, backend: Backend::Series, est_error: 0.0 });
    }
    let (s, k) = (terms.discounted_spot(), terms.discounted_strike());
    let vol = sigma * terms.tau.sqrt();
    let value = if vol == 0.0 {
        match terms.kind {
            OptionKind::Call => (s - k).max(0.0),
            OptionKind::Put => (k - s).max(0.0),
        }
    } else {
        let d2 = l / vol;
        let d1 = d2 + vol;
        match terms.kind {
            OptionKind::Call => s * normal::cdf(d1) - k * normal::cdf(d2),
            OptionKind::Put => k * normal::cdf(-d2) - s * normal::cdf(-d1),
        }
    };
    Ok(PriceResult { value: value.max(0.0), l_used: l, backend: Backend::Series, est_error: 0.0 })
}

/// `C - P - (S e^{-q tau} - K e^{-r tau})`, with both legs priced independently.
pub fn parity_residual(terms: &OptionTerms, model: &AssetModel, backend: Backend, quad: &QuadratureSpec) -> Result<f64> {
    let call = price(&terms.with_kind(OptionKind::Call), model, backend, quad)?;
    let put = price(&terms.with_kind(OptionKind::Put), model, backend, quad)?;
    Ok(call.value - put.value - (terms.discounted_spot() - terms.discounted_strike()))
}

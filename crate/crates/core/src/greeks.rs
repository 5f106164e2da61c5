//! Price sensitivities.
//!
//! Delta, rho and psi come straight from the transition-law tails. Gamma, theta and
//! vega also need the density of `Y` and its slope, which are taken from the series
//! expansion. The jump-parameter sensitivities (`kappa` to the arrival rate, `mu` to
//! the mean jump, `epsilon` to the jump dispersion) differentiate the Poisson mixture
//! term by term.
//!
//! With `sigma = 0` the law has a point mass at `l = 0`. There the price has a kink
//! and every sensitivity is reported as [`PricingError::AtomKink`].

use crate::error::{ensure_finite, finite_param, positive_param, PricingError, Result};
use crate::option::{l_parameter, AssetModel, OptionKind, OptionTerms};
use crate::quadrature::QuadratureSpec;
use crate::transform::{Backend, Measure, Mixture, SeriesExpansion, Tail, TransitionLaw};

/// Sensitivities shared with the Black–Scholes model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreekSet {
    /// `dV/dS`.
    pub delta: f64,
    /// `d^2V/dS^2`.
    pub gamma: f64,
    /// `dV/dr`.
    pub rho: f64,
    /// `dV/dq`.
    pub psi: f64,
    /// `dV/dt = -dV/dtau`.
    pub theta: f64,
    /// `dV/dsigma`; present only when the diffusion is switched on.
    pub vega: Option<f64>,
}

/// Sensitivities to the jump parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpGreekSet {
    /// `dV/dlambda`.
    pub kappa: f64,
    /// `dV/dnu`.
    pub mu: f64,
    /// `dV/ddelta`.
    pub epsilon: f64,
    /// Set when `sigma > 0`: the values are still exact derivatives of the
    /// series price, but go beyond the pure-jump setting the identities were built for.
    pub extension: bool,
}

/// Central difference refined by one Richardson step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub value: f64,
    /// `|refined - half-step central difference|`.
    pub error: f64,
}

/// Estimates `f'(at)` from central differences at `step` and `step / 2`.
pub fn fd_sensitivity(f: impl Fn(f64) -> Result<f64>, at: f64, step: f64) -> Result<FdEstimate> {
    finite_param("at", at)?;
    positive_param("step", step)?;
    let central = |h: f64| -> Result<f64> { Ok((f(at + h)? - f(at - h)?) / (2.0 * h)) };
    let coarse = central(step)?;
    let fine = central(0.5 * step)?;
    let value = ensure_finite((4.0 * fine - coarse) / 3.0, "finite difference")?;
    Ok(FdEstimate { value, error: (value - fine).abs() })
}

/// Pieces of the series expansion evaluated at one `l`.
struct SeriesPieces {
    /// Tilted lower tail.
    tilted_cdf: f64,
    /// Plain density and its slope.
    density: f64,
    density_slope: f64,
    /// Tilted density.
    tilted_density: f64,
    /// `sum_n Q_n [(1 + varsigma) G_{n+1} - G_n]` for the lower tails.
    tilted_jump_shift: f64,
    /// `sum_n P_n [F_{n+1} - F_n]` for the lower tails.
    plain_jump_shift: f64,
    /// `sum_n P_n [f_{n+1} - f_n]` for the component densities.
    density_jump_shift: f64,
}

fn jump_shift(mixture: &Mixture, growth: f64, l: f64, value: impl Fn(&crate::transform::Component, f64) -> f64) -> f64 {
    mixture
        .components
        .iter()
        .enumerate()
        .map(|(n, c)| c.weight * (growth * value(&mixture.shape(n + 1), l) - value(c, l)))
        .sum()
}

impl SeriesPieces {
    fn new(series: &SeriesExpansion, compensator: f64, l: f64) -> Self {
        let lower = |c: &crate::transform::Component, l: f64| c.lower(l);
        let density = |c: &crate::transform::Component, l: f64| c.density(l);
        Self {
            tilted_cdf: series.tilted.cdf(Tail::Lower, l),
            density: series.plain.density(l),
            density_slope: series.plain.density_slope(l),
            tilted_density: series.tilted.density(l),
            tilted_jump_shift: jump_shift(&series.tilted, 1.0 + compensator, l, lower),
            plain_jump_shift: jump_shift(&series.plain, 1.0, l, lower),
            density_jump_shift: jump_shift(&series.plain, 1.0, l, density),
        }
    }
}

fn check_kink(series: &SeriesExpansion, terms: &OptionTerms, l: f64) -> Result<()> {
    if series.atom_at(Measure::Plain, l) > 0.0 {
        let jump = (-terms.dividend() * terms.tau()).exp() * series.atom_at(Measure::Tilted, l);
        return Err(PricingError::AtomKink { l, delta_jump: jump });
    }
    Ok(())
}

fn maturity_guard(terms: &OptionTerms) -> Result<()> {
    if terms.tau() == 0.0 {
        Err(PricingError::DegenerateMaturity)
    } else {
        Ok(())
    }
}

/// Delta, gamma, rho, psi, theta and (for `sigma > 0`) vega.
pub fn common_greeks(
    terms: &OptionTerms,
    model: &AssetModel,
    backend: Backend,
    quad: &QuadratureSpec,
) -> Result<GreekSet> {
    maturity_guard(terms)?;
    let spec = model.char_spec(terms.tau())?;
    let series = SeriesExpansion::new(&spec, quad)?;
    let l = l_parameter(terms, model);
    check_kink(&series, terms, l)?;
    let pieces = SeriesPieces::new(&series, model.law().compensator(), l);

    let (tilted, plain) = match backend {
        Backend::Series => (pieces.tilted_cdf, series.plain.cdf(Tail::Lower, l)),
        Backend::Fourier => {
            let law = TransitionLaw::new(&spec, backend, quad)?;
            (
                law.cdf(Measure::Tilted, Tail::Lower, l)?.value,
                law.cdf(Measure::Plain, Tail::Lower, l)?.value,
            )
        }
    };

    let tau = terms.tau();
    let (r, q) = (terms.rate(), terms.dividend());
    let (s_disc, k_disc) = (terms.discounted_spot(), terms.discounted_strike());
    let sigma2 = model.sigma() * model.sigma();
    let lambda = model.lambda();
    let tilt_rate = 0.5 * sigma2 + lambda * model.law().compensator();

    // Diffusive parts of the time derivative: the second-derivative pieces of the
    // plain and tilted lower tails.
    let plain_diffusive = 0.5 * pieces.density_slope;
    let tilted_diffusive = 0.5 * ((-spec.tilt_exponent() - l).exp() * (pieces.density_slope + pieces.density) + tilted);

    let call_theta = q * s_disc * tilted - r * k_disc * plain + tilt_rate * s_disc * tilted
        - s_disc * (sigma2 * tilted_diffusive + lambda * pieces.tilted_jump_shift)
        + k_disc * (sigma2 * plain_diffusive + lambda * pieces.plain_jump_shift);

    let call = GreekSet {
        delta: (-q * tau).exp() * tilted,
        gamma: (-q * tau).exp() / terms.spot() * pieces.tilted_density,
        rho: tau * k_disc * plain,
        psi: -tau * s_disc * tilted,
        theta: call_theta,
        vega: (model.sigma() > 0.0).then(|| model.sigma() * tau * k_disc * pieces.density),
    };
    let set = match terms.kind() {
        OptionKind::Call => call,
        OptionKind::Put => GreekSet {
            delta: call.delta - (-q * tau).exp(),
            gamma: call.gamma,
            rho: call.rho - tau * k_disc,
            psi: call.psi + tau * s_disc,
            theta: call.theta - q * s_disc + r * k_disc,
            vega: call.vega,
        },
    };
    for v in [set.delta, set.gamma, set.rho, set.psi, set.theta] {
        ensure_finite(v, "greeks")?;
    }
    Ok(set)
}

/// Which jump parameter is being varied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum JumpParameter {
    Rate,
    Mean,
    Dispersion,
}

/// Derivative of the series price in one jump parameter, summed term by term.
fn mixture_derivative(
    terms: &OptionTerms,
    model: &AssetModel,
    series: &SeriesExpansion,
    l: f64,
    param: JumpParameter,
) -> f64 {
    let tau = terms.tau();
    let lambda = model.lambda();
    let law = model.law();
    let growth = 1.0 + law.compensator();
    let delta = law.sd();

    // (dl, d nu, d delta, dM_plain, dM_tilted)
    let (dl, dnu, ddelta, dm_plain, dm_tilted) = match param {
        JumpParameter::Rate => (-law.compensator() * tau, 0.0, 0.0, tau, tau * growth),
        JumpParameter::Mean => (-lambda * tau * growth, 1.0, 0.0, 0.0, lambda * tau * growth),
        JumpParameter::Dispersion => {
            let d = lambda * tau * delta * growth;
            (-d, 0.0, 1.0, 0.0, d)
        }
    };

    let tail = terms.kind().tail();
    let sign = match tail {
        Tail::Lower => 1.0,
        Tail::Upper => -1.0,
    };

    let leg = |mixture: &Mixture, tilted: bool, dm: f64| -> f64 {
        let mut total = 0.0;
        let mut prev_weight = 0.0;
        for (n, c) in mixture.components.iter().enumerate() {
            let value = c.tail(tail, l);
            total += dm * (prev_weight - c.weight) * value;
            prev_weight = c.weight;
            if c.sd > 0.0 {
                let nf = n as f64;
                let dsd = if ddelta != 0.0 { nf * delta / c.sd } else { 0.0 };
                let dmean = -nf * dnu - if tilted { 2.0 * c.sd * dsd } else { 0.0 };
                let z = (l - c.mean) / c.sd;
                let dz = (dl - dmean) / c.sd - z * dsd / c.sd;
                total += c.weight * sign * crate::normal::pdf(z) * dz;
            }
        }
        // Weight flowing into the first omitted component; not small when the
        // mixture is a single term.
        total + dm * prev_weight * mixture.next.tail(tail, l)
    };

    let (s_disc, k_disc) = (terms.discounted_spot(), terms.discounted_strike());
    let tilted = leg(&series.tilted, true, dm_tilted);
    let plain = leg(&series.plain, false, dm_plain);
    match terms.kind() {
        OptionKind::Call => s_disc * tilted - k_disc * plain,
        OptionKind::Put => k_disc * plain - s_disc * tilted,
    }
}

/// `kappa`, `mu` and `epsilon` from term-by-term differentiation of the series price.
pub fn jump_greeks(terms: &OptionTerms, model: &AssetModel, quad: &QuadratureSpec) -> Result<JumpGreekSet> {
    maturity_guard(terms)?;
    let spec = model.char_spec(terms.tau())?;
    let series = SeriesExpansion::new(&spec, quad)?;
    let l = l_parameter(terms, model);
    check_kink(&series, terms, l)?;
    let d = |p| ensure_finite(mixture_derivative(terms, model, &series, l, p), "jump greeks");
    Ok(JumpGreekSet {
        kappa: d(JumpParameter::Rate)?,
        mu: d(JumpParameter::Mean)?,
        epsilon: d(JumpParameter::Dispersion)?,
        extension: model.sigma() > 0.0,
    })
}

/// Black–Scholes Greeks with volatility `sigma > 0`.
pub fn bs_greeks(terms: &OptionTerms, sigma: f64) -> Result<GreekSet> {
    positive_param("sigma", sigma)?;
    maturity_guard(terms)?;
    let tau = terms.tau();
    let (r, q) = (terms.rate(), terms.dividend());
    let (s_disc, k_disc) = (terms.discounted_spot(), terms.discounted_strike());
    let vol = sigma * tau.sqrt();
    let model = AssetModel::new(0.0, 0.0, 0.0, sigma)?;
    let d2 = l_parameter(terms, &model) / vol;
    let d1 = d2 + vol;
    let (n1, n2, pd1) = (crate::normal::cdf(d1), crate::normal::cdf(d2), crate::normal::pdf(d1));
    let call = GreekSet {
        delta: (-q * tau).exp() * n1,
        gamma: (-q * tau).exp() * pd1 / (terms.spot() * vol),
        rho: tau * k_disc * n2,
        psi: -tau * s_disc * n1,
        theta: -s_disc * pd1 * sigma / (2.0 * tau.sqrt()) + q * s_disc * n1 - r * k_disc * n2,
        vega: Some(s_disc * pd1 * tau.sqrt()),
    };
    Ok(match terms.kind() {
        OptionKind::Call => call,
        OptionKind::Put => GreekSet {
            delta: call.delta - (-q * tau).exp(),
            gamma: call.gamma,
            rho: call.rho - tau * k_disc,
            psi: call.psi + tau * s_disc,
            theta: call.theta - q * s_disc + r * k_disc,
            vega: call.vega,
        },
    })
}

/// Both sides of one sensitivity identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1e-8)`.
    pub residual: f64,
}

impl IdentityResidual {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1e-8);
        Self { name, lhs, rhs, residual: (lhs - rhs).abs() / scale }
    }
}

/// Step used for the finite differences inside the identity checks.
fn identity_step(value: f64) -> f64 {
    1e-4 * value.abs().max(1.0)
}

/// Cross-checks between theta, gamma, the jump Greeks and finite differences of
/// delta and rho in the arrival rate.
pub fn identity_report(terms: &OptionTerms, model: &AssetModel, quad: &QuadratureSpec) -> Result<Vec<IdentityResidual>> {
    maturity_guard(terms)?;
    let tau = terms.tau();
    let (r, q) = (terms.rate(), terms.dividend());
    let (s, s_disc, k_disc) = (terms.spot(), terms.discounted_spot(), terms.discounted_strike());
    let lambda = model.lambda();
    let compensator = model.law().compensator();
    let call_terms = terms.with_kind(OptionKind::Call);
    let put_terms = terms.with_kind(OptionKind::Put);

    let spec = model.char_spec(tau)?;
    let series = SeriesExpansion::new(&spec, quad)?;
    let l = l_parameter(terms, model);
    check_kink(&series, terms, l)?;
    let pieces = SeriesPieces::new(&series, compensator, l);
    let tilted_upper = series.tilted.cdf(Tail::Upper, l);
    let plain_lower = series.plain.cdf(Tail::Lower, l);
    let plain_upper = series.plain.cdf(Tail::Upper, l);

    let call = common_greeks(&call_terms, model, Backend::Series, quad)?;
    let put = common_greeks(&put_terms, model, Backend::Series, quad)?;
    let jc = jump_greeks(&call_terms, model, quad)?;
    let jp = jump_greeks(&put_terms, model, quad)?;

    let h = identity_step(lambda);
    let greek_in_lambda = |pick: fn(&GreekSet) -> f64| {
        fd_sensitivity(
            |lam| Ok(pick(&common_greeks(&call_terms, &model.with_lambda(lam)?, Backend::Series, quad)?)),
            lambda,
            h,
        )
    };
    let d_delta = greek_in_lambda(|g| g.delta)?.value;
    let d_rho = greek_in_lambda(|g| g.rho)?.value;
    let gamma_term = compensator * tau * s * s * call.gamma;

    let mut out = vec![
        IdentityResidual::new(
            "call theta from kappa",
            call.theta,
            q * s_disc * pieces.tilted_cdf - r * k_disc * plain_lower - lambda * jc.kappa / tau,
        ),
        IdentityResidual::new(
            "put theta from kappa",
            put.theta,
            -q * s_disc * tilted_upper + r * k_disc * plain_upper - lambda * jp.kappa / tau,
        ),
        IdentityResidual::new("kappa from delta and rho", jc.kappa, s * d_delta - d_rho / tau),
        IdentityResidual::new(
            "kappa transform form",
            jc.kappa / tau,
            -compensator * s_disc * pieces.tilted_cdf + s_disc * pieces.tilted_jump_shift
                - k_disc * pieces.plain_jump_shift,
        ),
        IdentityResidual::new("call and put kappa", jc.kappa, jp.kappa),
        IdentityResidual::new("call and put mu", jc.mu, jp.mu),
        IdentityResidual::new("call and put epsilon", jc.epsilon, jp.epsilon),
    ];
    if lambda > 0.0 {
        out.push(IdentityResidual::new(
            "mu transform form",
            jc.mu / (lambda * tau),
            -compensator * s_disc * pieces.tilted_cdf + s_disc * pieces.tilted_jump_shift,
        ));
        out.push(IdentityResidual::new("mu from delta and gamma", jc.mu / lambda, s * d_delta + gamma_term));
        out.push(IdentityResidual::new(
            "kappa from mu, rho and gamma",
            jc.kappa,
            jc.mu / lambda - d_rho / tau - gamma_term,
        ));
        if model.delta() > 0.0 {
            out.push(IdentityResidual::new(
                "epsilon from mu and gamma",
                jc.epsilon / (lambda * tau * model.delta()),
                jc.mu / (lambda * tau) + s * s * call.gamma + k_disc * pieces.density_jump_shift,
            ));
        }
    }
    out.push(IdentityResidual::new(
        "tail slopes",
        s_disc * pieces.tilted_density,
        k_disc * pieces.density,
    ));
    Ok(out)
}

//! Residual checks of the pricing equations and cross-checks between routes.
//!
//! Prices are inserted into the backward integro-differential equations using
//! central finite differences for the local terms and Gauss–Hermite quadrature for
//! the jump integral. With `sigma = 0` the option price has a kink at `l = 0` from
//! the point mass of the transition law. That part is split off and its jump
//! integral is taken in closed form, and grid points within a fixed radius of the
//! kink are excluded and listed.

use crate::error::{require, Result};
use crate::greeks::{bs_greeks, common_greeks};
use crate::normal;
use crate::option::{bs_price, l_parameter, parity_residual, price, AssetModel, OptionKind, OptionTerms};
use crate::quadrature::{gaussian_expectation, QuadratureSpec};
use crate::shortrate::{a_shot, a_vasicek, bond_price, BondTerms, BondVariant, RateModel};
use crate::jump_measure::{ArrivalRate, GaussianJumpLaw};
use crate::transform::{transition_cdf, Backend, CharSpec, Measure, Tail};
/// Finite-difference steps in time and in the state variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub time: f64,
    pub state: f64,
}

impl Default for FdSteps {
    /// The state step balances the second-derivative truncation error against
    /// cancellation in `(V(x+h) - 2V(x) + V(x-h)) / h^2`.
    fn default() -> Self {
        Self { time: 1e-5, state: 7.5e-5 }
    }
}

impl FdSteps {
    /// Both steps multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self { time: self.time * factor, state: self.state * factor }
    }
}

/// A grid point left out of a check, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcludedPoint {
    pub coordinates: (f64, f64),
    pub reason: &'static str,
}

/// Largest normalised residual over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_residual: f64,
    /// Coordinates of the largest residual.
    pub worst_at: (f64, f64),
    pub points: usize,
    pub steps: Option<FdSteps>,
    pub hermite_nodes: Option<usize>,
    pub excluded: Vec<ExcludedPoint>,
}

impl ResidualReport {
    fn empty(steps: Option<FdSteps>, hermite_nodes: Option<usize>) -> Self {
        Self { max_residual: 0.0, worst_at: (f64::NAN, f64::NAN), points: 0, steps, hermite_nodes, excluded: Vec::new() }
    }

    fn record(&mut self, at: (f64, f64), residual: f64) {
        self.points += 1;
        if residual > self.max_residual || residual.is_nan() {
            self.max_residual = residual;
            self.worst_at = at;
        }
    }
}

/// Distance in `l` below which a `sigma = 0` grid point counts as on the kink.
pub const KINK_RADIUS: f64 = 0.05;

/// Largest `|C - P - (S e^{-q tau} - K e^{-r tau})| / max(S, K)` over all
/// contract and model combinations.
pub fn parity_report(
    contracts: &[OptionTerms],
    models: &[AssetModel],
    backend: Backend,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    let mut report = ResidualReport::empty(None, None);
    for (i, terms) in contracts.iter().enumerate() {
        for (j, model) in models.iter().enumerate() {
            let res = parity_residual(terms, model, backend, quad)?;
            report.record((i as f64, j as f64), res.abs() / terms.spot().max(terms.strike()));
        }
    }
    Ok(report)
}

/// Expected intrinsic value of the point-mass part after one extra jump.
fn kink_part_after_jump(kind: OptionKind, l: f64, law: &GaussianJumpLaw) -> f64 {
    let (nu, d) = (law.mean(), law.sd());
    let growth = (l + nu + 0.5 * d * d).exp();
    match kind {
        OptionKind::Call => growth * normal::cdf((l + nu + d * d) / d) - normal::cdf((l + nu) / d),
        OptionKind::Put => normal::cdf(-(l + nu) / d) - growth * normal::cdf(-(l + nu + d * d) / d),
    }
}

fn kink_part(kind: OptionKind, l: f64) -> f64 {
    match kind {
        OptionKind::Call => l.exp_m1().max(0.0),
        OptionKind::Put => (-l.exp_m1()).max(0.0),
    }
}

/// Residual of the option pricing equation in log-spot `x = ln(S/K)` on the grid
/// `log_spots x maturities`, normalised by `max(|r V|, 1e-3)`.
pub fn option_pide_residual(
    contract: &OptionTerms,
    model: &AssetModel,
    log_spots: &[f64],
    maturities: &[f64],
    steps: FdSteps,
    hermite_nodes: usize,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    let pure_jump = model.sigma() == 0.0;
    require(!(pure_jump && model.delta() == 0.0 && model.lambda() > 0.0), "delta", || {
        "jump dispersion must be positive when sigma = 0".into()
    })?;
    let strike = contract.strike();
    let (r, q) = (contract.rate(), contract.dividend());
    let (lambda, sigma) = (model.lambda(), model.sigma());
    let compensator = model.law().compensator();
    let value = |x: f64, tau: f64| -> Result<f64> {
        let t = OptionTerms::new(strike * x.exp(), strike, tau, r, q, contract.kind())?;
        Ok(price(&t, model, Backend::Series, quad)?.value)
    };
    let mut report = ResidualReport::empty(Some(steps), Some(hermite_nodes));
    for &tau in maturities {
        require(tau > steps.time, "tau", || format!("maturity {tau} must exceed the time step"))?;
        for &x in log_spots {
            let terms = OptionTerms::new(strike * x.exp(), strike, tau, r, q, contract.kind())?;
            let l = l_parameter(&terms, model);
            if pure_jump && l.abs() < KINK_RADIUS {
                report.excluded.push(ExcludedPoint { coordinates: (x, tau), reason: "kink at l = 0" });
                continue;
            }
            let (h, dt) = (steps.state, steps.time);
            let v = value(x, tau)?;
            let (vp, vm) = (value(x + h, tau)?, value(x - h, tau)?);
            let v_x = (vp - vm) / (2.0 * h);
            let v_xx = (vp - 2.0 * v + vm) / (h * h);
            let v_tau = (value(x, tau + dt)? - value(x, tau - dt)?) / (2.0 * dt);

            let discounted_strike = strike * (-r * tau).exp();
            let atom_weight = if pure_jump { (-lambda * tau).exp() } else { 0.0 };
            let kink = |l: f64| atom_weight * discounted_strike * kink_part(contract.kind(), l);
            let smooth = gaussian_expectation(hermite_nodes, model.nu(), model.delta(), |eta| {
                value(x + eta, tau).map(|v| v - kink(l + eta)).unwrap_or(f64::NAN)
            });
            let kink_jump = atom_weight * discounted_strike * kink_part_after_jump(contract.kind(), l, model.law());
            let jump = lambda * (smooth + kink_jump - v - compensator * v_x);

            let residual = -v_tau + 0.5 * sigma * sigma * v_xx + (r - q - 0.5 * sigma * sigma) * v_x + jump - r * v;
            report.record((x, tau), residual.abs() / (r * v).abs().max(1e-3));
        }
    }
    Ok(report)
}

/// Residual of the bond pricing equation in `(t, r)`, normalised by `max(|r P|, 1e-3)`.
#[allow(clippy::too_many_arguments)]
pub fn bond_pide_residual(
    model: &RateModel,
    variant: BondVariant,
    maturity: f64,
    times: &[f64],
    rates: &[f64],
    steps: FdSteps,
    hermite_nodes: usize,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    let m = model.restrict(variant);
    let value = |t: f64, r: f64| -> Result<f64> {
        Ok(bond_price(&m, &BondTerms::new(t, maturity, r)?, BondVariant::General, quad)?.value)
    };
    let mut report = ResidualReport::empty(Some(steps), Some(hermite_nodes));
    for &t in times {
        require(t + steps.time < maturity, "t", || format!("time {t} too close to maturity"))?;
        for &r in rates {
            let (h, dt) = (steps.state, steps.time);
            let p = value(t, r)?;
            let (pp, pm) = (value(t, r + h)?, value(t, r - h)?);
            let p_r = (pp - pm) / (2.0 * h);
            let p_rr = (pp - 2.0 * p + pm) / (h * h);
            let p_t = (value(t + dt, r)? - value(t - dt, r)?) / (2.0 * dt);
            let jump = if m.lambda() > 0.0 {
                let expected = gaussian_expectation(hermite_nodes, m.law().mean(), m.law().sd(), |eta| {
                    value(t, r + eta).unwrap_or(f64::NAN)
                });
                m.lambda() * (expected - p)
            } else {
                0.0
            };
            let residual = p_t + m.mean_reversion() * (m.long_run() - r) * p_r + 0.5 * m.sigma() * m.sigma() * p_rr
                + jump
                - r * p;
            report.record((t, r), residual.abs() / (r * p).abs().max(1e-3));
        }
    }
    Ok(report)
}

/// Settings of the small-jump, high-intensity limit study.
///
/// At scale `n` the intensity is `n * base_lambda`. The mean jump `drift / lambda`
/// and the jump variance `dispersion^2 / lambda` keep the first two moments of the
/// jump component fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionStudy {
    pub option: OptionTerms,
    pub base_lambda: f64,
    pub drift: f64,
    pub dispersion: f64,
    pub rate_reversion: f64,
    pub rate_base_lambda: f64,
    pub rate_drift: f64,
    pub rate_dispersion: f64,
    pub bond_tenor: f64,
    pub scales: Vec<f64>,
}

impl Default for DiffusionStudy {
    fn default() -> Self {
        Self {
            option: OptionTerms::new(100.0, 100.0, 1.0, 0.02, 0.0, OptionKind::Call).expect("valid terms"),
            base_lambda: 1.0,
            drift: -0.05,
            dispersion: 0.2,
            rate_reversion: 0.5,
            rate_base_lambda: 1.0,
            rate_drift: 0.02,
            rate_dispersion: 0.02,
            bond_tenor: 5.0,
            scales: vec![1.0, 10.0, 100.0, 1000.0],
        }
    }
}

/// Relative gaps to the matched diffusion at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub scale: f64,
    pub lambda: f64,
    pub matched_sigma: f64,
    pub price_error: f64,
    pub theta_error: f64,
    pub bond_error: f64,
}

/// Compares the jump model against the diffusion with the same variance as the
/// intensity grows and the jumps shrink.
pub fn diffusion_convergence(study: &DiffusionStudy, quad: &QuadratureSpec) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(study.scales.len());
    for &n in &study.scales {
        require(n > 0.0 && n.is_finite(), "scale", || format!("must be positive, got {n}"))?;
        let lambda = n * study.base_lambda;
        let nu = study.drift / lambda;
        let delta = study.dispersion / lambda.sqrt();
        let model = AssetModel::pure_jump(lambda, nu, delta)?;
        let matched_sigma = (lambda * model.law().second_moment()).sqrt();
        let jump_price = price(&study.option, &model, Backend::Series, quad)?.value;
        let diff_price = bs_price(&study.option, matched_sigma)?.value;
        let jump_theta = common_greeks(&study.option, &model, Backend::Series, quad)?.theta;
        let diff_theta = bs_greeks(&study.option, matched_sigma)?.theta;

        let rate_lambda = n * study.rate_base_lambda;
        let rates = RateModel::new(
            study.rate_reversion,
            0.0,
            0.0,
            rate_lambda,
            study.rate_drift / rate_lambda,
            study.rate_dispersion / rate_lambda.sqrt(),
        )?;
        let jump_a = a_shot(&rates, 0.0, study.bond_tenor, quad)?;
        let diff_a = a_vasicek(&rates.diffusion_equivalent(), 0.0, study.bond_tenor)?;

        rows.push(ConvergenceRow {
            scale: n,
            lambda,
            matched_sigma,
            price_error: ((jump_price - diff_price) / diff_price).abs(),
            theta_error: ((jump_theta - diff_theta) / diff_theta).abs(),
            bond_error: ((jump_a - diff_a) / diff_a).abs(),
        });
    }
    Ok(rows)
}

/// Parameter grid on which the two transform backends are compared.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementGrid {
    pub tau: f64,
    pub intensities: Vec<f64>,
    pub jump_means: Vec<f64>,
    pub jump_sds: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub moneyness: Vec<f64>,
}

impl Default for AgreementGrid {
    fn default() -> Self {
        Self {
            tau: 1.0,
            intensities: vec![0.25, 1.0, 4.0],
            jump_means: vec![-0.1, 0.0, 0.1],
            jump_sds: vec![0.05, 0.2],
            sigmas: vec![0.0, 0.2],
            moneyness: (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect(),
        }
    }
}

/// Largest absolute gap between the series and Fourier values of all four tails
/// under both measures. Point masses at `l = 0` are excluded.
pub fn backend_agreement(grid: &AgreementGrid, quad: &QuadratureSpec) -> Result<ResidualReport> {
    let mut report = ResidualReport::empty(None, Some(quad.k_nodes));
    for &lambda in &grid.intensities {
        for &nu in &grid.jump_means {
            for &delta in &grid.jump_sds {
                for &sigma in &grid.sigmas {
                    let spec = CharSpec::new(grid.tau, ArrivalRate::new(lambda)?, sigma, GaussianJumpLaw::new(nu, delta)?)?;
                    for &l in &grid.moneyness {
                        if sigma == 0.0 && l.abs() < 1e-12 {
                            report.excluded.push(ExcludedPoint { coordinates: (lambda, l), reason: "point mass at l = 0" });
                            continue;
                        }
                        for measure in [Measure::Plain, Measure::Tilted] {
                            for tail in [Tail::Lower, Tail::Upper] {
                                let a = transition_cdf(&spec, measure, tail, l, Backend::Series, quad)?.value;
                                let b = transition_cdf(&spec, measure, tail, l, Backend::Fourier, quad)?.value;
                                report.record((lambda, l), (a - b).abs());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

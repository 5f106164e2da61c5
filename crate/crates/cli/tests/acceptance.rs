//! Acceptance gate: twelve criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed on every run.
//! The process exits non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use shotnoise::{
    a_general, a_shot, a_vasicek, b_factor, backend_agreement, bond_pide_residual, bond_price, bs_price,
    common_greeks, conditional_moments, diffusion_convergence, fd_sensitivity, identity_report, jump_greeks,
    l_parameter, mc_bond_price, mc_discounted_forward, mc_option_price, mc_rate_moments, ode_residual,
    option_pide_residual, parity_residual, price, AgreementGrid, AssetModel, Backend, BondTerms, BondVariant,
    DiffusionStudy, FdSteps, OptionKind, OptionTerms, QuadratureSpec, RateModel, Result, SimConfig, KINK_RADIUS,
};

/// Outcome of one criterion: pass flag and a one-line summary of the measured numbers.
struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Running maximum of a normalised error and where it occurred.
#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
    count: usize,
}

impl Worst {
    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }
}

// Independent normal distribution: Taylor series in the body, asymptotic tail beyond.
fn phi(x: f64) -> f64 {
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x.abs() > 8.0 {
        let z = x.abs();
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..8 {
            term *= -((2 * k - 1) as f64) / (z * z);
            sum += term;
        }
        let tail = density / z * sum;
        return if x < 0.0 { tail } else { 1.0 - tail };
    }
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    while term.abs() > 1e-17 * sum.abs().max(1e-300) {
        k += 1.0;
        term *= x * x / (2.0 * k + 1.0);
        sum += term;
    }
    0.5 + density * sum
}

/// `E[(F e^J - K)^+]` with `J ~ N(m, s^2)`, or the intrinsic value when `s = 0`.
fn lognormal_call(forward: f64, strike: f64, m: f64, s: f64) -> f64 {
    if s == 0.0 {
        return (forward * m.exp() - strike).max(0.0);
    }
    let d2 = ((forward / strike).ln() + m) / s;
    forward * (m + 0.5 * s * s).exp() * phi(d2 + s) - strike * phi(d2)
}

fn oracle_black_scholes(terms: &OptionTerms, sigma: f64) -> f64 {
    let tau = terms.tau();
    let forward = terms.spot() * ((terms.rate() - terms.dividend()) * tau).exp();
    let s = sigma * tau.sqrt();
    let call = (-terms.rate() * tau).exp() * lognormal_call(forward, terms.strike(), -0.5 * s * s, s);
    match terms.kind() {
        OptionKind::Call => call,
        OptionKind::Put => call - terms.discounted_spot() + terms.discounted_strike(),
    }
}

/// Pure jump price by conditioning on the number of jumps.
fn oracle_pure_jump(terms: &OptionTerms, lambda: f64, nu: f64, delta: f64) -> f64 {
    let tau = terms.tau();
    let compensator = (nu + 0.5 * delta * delta).exp() - 1.0;
    let forward = terms.spot() * ((terms.rate() - terms.dividend() - lambda * compensator) * tau).exp();
    let mean = lambda * tau;
    let mut weight = (-mean).exp();
    let mut call = 0.0;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        call += weight * lognormal_call(forward, terms.strike(), nf * nu, (nf * delta * delta).sqrt());
        n += 1;
        weight *= mean / n as f64;
        if nf > mean && weight < 1e-18 {
            break;
        }
    }
    call *= (-terms.rate() * tau).exp();
    match terms.kind() {
        OptionKind::Call => call,
        OptionKind::Put => call - terms.discounted_spot() + terms.discounted_strike(),
    }
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn contract(spot: f64, strike: f64, tau: f64, rate: f64, dividend: f64, kind: OptionKind) -> OptionTerms {
    OptionTerms::new(spot, strike, tau, rate, dividend, kind).expect("valid contract")
}

/// The 3 x 3 x 3 x 3 grid over jump count, jump mean, jump dispersion and diffusion.
fn parity_models(tau: f64) -> Vec<AssetModel> {
    let mut models = Vec::new();
    for count in [0.25, 1.0, 4.0] {
        for nu in [-0.1, 0.0, 0.1] {
            for delta in [0.05, 0.2, 0.3] {
                for sigma in [0.0, 0.1, 0.2] {
                    models.push(AssetModel::new(count / tau, nu, delta, sigma).expect("valid model"));
                }
            }
        }
    }
    models
}

fn parity() -> Result<Verdict> {
    let start = Instant::now();
    let tau = 1.0;
    let mut worst = Worst::default();
    for model in parity_models(tau) {
        for strike in [80.0, 100.0, 125.0] {
            let terms = contract(100.0, strike, tau, 0.03, 0.01, OptionKind::Call);
            let res = parity_residual(&terms, &model, Backend::Series, &quad())?.abs() / strike.max(100.0);
            worst.record(res, || format!("{model:?} K={strike}"));
        }
    }
    // Two-year contract with two expected jumps.
    let model = AssetModel::new(1.0, 0.1, 0.3, 0.1)?;
    let terms = contract(100.0, 110.0, 2.0, 0.03, 0.01, OptionKind::Put);
    let res = parity_residual(&terms, &model, Backend::Series, &quad())?.abs() / 110.0;
    worst.record(res, || "two-year contract".into());
    let elapsed = start.elapsed();
    Ok(Verdict::new(
        worst.value <= 1e-8 && elapsed < Duration::from_secs(10),
        format!("max |C-P-F|/max(S,K) = {:.2e} over {} points, {:.2?}", worst.value, worst.count, elapsed),
    ))
}

fn black_scholes_reduction() -> Result<Verdict> {
    let mut model_gap = Worst::default();
    let mut oracle_gap = Worst::default();
    for sigma in [0.1, 0.2, 0.4] {
        let model = AssetModel::new(0.0, -0.05, 0.15, sigma)?;
        for strike in [70.0, 95.0, 100.0, 130.0] {
            for tau in [0.25, 1.0, 3.0] {
                for kind in [OptionKind::Call, OptionKind::Put] {
                    let terms = contract(100.0, strike, tau, 0.04, 0.015, kind);
                    let closed = bs_price(&terms, sigma)?.value;
                    for backend in [Backend::Series, Backend::Fourier] {
                        let general = price(&terms, &model, backend, &quad())?.value;
                        model_gap.record((general - closed).abs(), || format!("{backend} {terms:?}"));
                    }
                    oracle_gap.record((closed - oracle_black_scholes(&terms, sigma)).abs(), || format!("{terms:?}"));
                }
            }
        }
    }
    let atm = contract(100.0, 100.0, 1.0, 0.0, 0.0, OptionKind::Call);
    let atm_value = bs_price(&atm, 0.2)?.value;
    let atm_gap = (atm_value - oracle_black_scholes(&atm, 0.2)).abs();
    let pass = model_gap.value <= 1e-9 && oracle_gap.value <= 1e-9 && atm_gap <= 1e-6 && (atm_value - 7.9656).abs() < 5e-5;
    Ok(Verdict::new(
        pass,
        format!(
            "lambda=0 vs closed form {:.2e}; closed form vs own normal cdf {:.2e}; ATM call {atm_value:.6}",
            model_gap.value, oracle_gap.value
        ),
    ))
}

fn shot_noise_reduction() -> Result<Verdict> {
    let mut worst = Worst::default();
    for (lambda, nu, delta) in [(1.0, -0.05, 0.15), (0.5, 0.1, 0.3), (4.0, 0.0, 0.05), (2.0, -0.1, 0.2)] {
        let model = AssetModel::new(lambda, nu, delta, 0.0)?;
        for strike in [80.0, 95.0, 110.0, 125.0] {
            for kind in [OptionKind::Call, OptionKind::Put] {
                let terms = contract(100.0, strike, 1.0, 0.03, 0.01, kind);
                let oracle = oracle_pure_jump(&terms, lambda, nu, delta);
                for backend in [Backend::Series, Backend::Fourier] {
                    let value = price(&terms, &model, backend, &quad())?.value;
                    worst.record((value - oracle).abs(), || format!("{backend} {model:?} K={strike} {}", kind.name()));
                }
            }
        }
    }
    Ok(Verdict::new(
        worst.value <= 1e-9,
        format!("sigma=0 price vs jump-count conditioning {:.2e} over {} points", worst.value, worst.count),
    ))
}

fn backend_cross_validation() -> Result<Verdict> {
    let start = Instant::now();
    let report = backend_agreement(&AgreementGrid::default(), &quad())?;
    let elapsed = start.elapsed();
    Ok(Verdict::new(
        report.max_residual <= 1e-7 && elapsed < Duration::from_secs(60),
        format!(
            "max |series-fourier| = {:.2e} over {} values ({} atom points excluded), {:.2?}",
            report.max_residual,
            report.points,
            report.excluded.len(),
            elapsed
        ),
    ))
}

fn monte_carlo() -> Result<Verdict> {
    const PATHS: u64 = 1_000_000;
    let start = Instant::now();
    let mut worst = Worst::default();
    let mut seed = 2_026_000;
    let mut next_sim = || {
        seed += 1;
        SimConfig::new(PATHS, seed, false)
    };
    let models = [
        AssetModel::pure_jump(1.0, -0.05, 0.15)?,
        AssetModel::new(0.5, 0.05, 0.1, 0.15)?,
        AssetModel::new(3.0, -0.02, 0.08, 0.2)?,
    ];
    for model in &models {
        for strike in [90.0, 100.0, 110.0] {
            for kind in [OptionKind::Call, OptionKind::Put] {
                let terms = contract(100.0, strike, 1.0, 0.02, 0.0, kind);
                let exact = price(&terms, model, Backend::Series, &quad())?.value;
                let z = mc_option_price(&terms, model, &next_sim()?)?.z_score(exact).abs();
                worst.record(z, || format!("{model:?} K={strike} {}", kind.name()));
            }
        }
        let terms = contract(100.0, 100.0, 1.0, 0.02, 0.01, OptionKind::Call);
        let z = mc_discounted_forward(&terms, model, &next_sim()?)?.z_score(terms.discounted_spot()).abs();
        worst.record(z, || format!("forward {model:?}"));
    }
    let rates = RateModel::new(0.5, 0.03, 0.01, 2.0, 0.01, 0.02)?;
    for maturity in [1.0, 5.0] {
        let terms = BondTerms::new(0.0, maturity, 0.03)?;
        for variant in BondVariant::ALL {
            let exact = bond_price(&rates, &terms, variant, &quad())?.value;
            let z = mc_bond_price(&rates, &terms, variant, &next_sim()?)?.z_score(exact).abs();
            worst.record(z, || format!("bond {variant} T={maturity}"));
        }
    }
    let elapsed = start.elapsed();
    Ok(Verdict::new(
        worst.value <= 3.0 && elapsed < Duration::from_secs(300),
        format!("max |z| = {:.2} over {} estimates at 1e6 paths, {:.2?}; worst {}", worst.value, worst.count, elapsed, worst.at),
    ))
}

/// Relative gap with a floor that keeps near-zero sensitivities from dividing by noise.
fn rel_gap(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / numeric.abs().max(1e-8)
}

fn greek_checks(terms: &OptionTerms, model: &AssetModel, worst: &mut Worst) -> Result<()> {
    let q = quad();
    let g = common_greeks(terms, model, Backend::Series, &q)?;
    let j = jump_greeks(terms, model, &q)?;
    let value = |t: &OptionTerms, m: &AssetModel| -> Result<f64> { Ok(price(t, m, Backend::Series, &q)?.value) };
    let spot = terms.spot();

    let delta = fd_sensitivity(|s| value(&terms.with_spot(s)?, model), spot, 0.5)?.value;
    let h = 0.5;
    let second = |h: f64| -> Result<f64> {
        Ok((value(&terms.with_spot(spot + h)?, model)? - 2.0 * value(terms, model)? + value(&terms.with_spot(spot - h)?, model)?)
            / (h * h))
    };
    let gamma = (4.0 * second(0.5 * h)? - second(h)?) / 3.0;
    let rho = fd_sensitivity(|r| value(&terms.with_rate(r)?, model), terms.rate(), 1e-3)?.value;
    let psi = fd_sensitivity(|d| value(&terms.with_dividend(d)?, model), terms.dividend(), 1e-3)?.value;
    let theta = -fd_sensitivity(|t| value(&terms.with_tau(t)?, model), terms.tau(), 1e-3)?.value;
    let kappa = fd_sensitivity(|l| value(terms, &model.with_lambda(l)?), model.lambda(), 1e-3)?.value;
    let mu = fd_sensitivity(|n| value(terms, &model.with_nu(n)?), model.nu(), 1e-3)?.value;
    let epsilon = fd_sensitivity(|d| value(terms, &model.with_delta(d)?), model.delta(), 1e-3)?.value;

    let mut pairs = vec![
        ("delta", g.delta, delta),
        ("gamma", g.gamma, gamma),
        ("rho", g.rho, rho),
        ("psi", g.psi, psi),
        ("theta", g.theta, theta),
        ("kappa", j.kappa, kappa),
        ("mu", j.mu, mu),
        ("epsilon", j.epsilon, epsilon),
    ];
    if let Some(vega) = g.vega {
        let fd = fd_sensitivity(|s| value(terms, &model.with_sigma(s)?), model.sigma(), 1e-3)?.value;
        pairs.push(("vega", vega, fd));
    }
    for (name, analytic, numeric) in pairs {
        worst.record(rel_gap(analytic, numeric), || {
            format!("{name}: {analytic} vs {numeric} at {} {model:?} K={} tau={}", terms.kind().name(), terms.strike(), terms.tau())
        });
    }
    Ok(())
}

fn greeks_vs_differences() -> Result<Verdict> {
    let mut worst = Worst::default();
    let models = [
        AssetModel::pure_jump(1.0, -0.05, 0.15)?,
        AssetModel::pure_jump(2.5, 0.08, 0.25)?,
        AssetModel::new(0.5, 0.05, 0.1, 0.15)?,
        AssetModel::new(3.0, -0.1, 0.2, 0.25)?,
    ];
    let mut skipped = 0;
    for model in &models {
        for strike in [85.0, 100.0, 115.0] {
            for tau in [0.5, 1.5] {
                for kind in [OptionKind::Call, OptionKind::Put] {
                    let terms = contract(100.0, strike, tau, 0.03, 0.01, kind);
                    if model.sigma() == 0.0 && l_parameter(&terms, model).abs() < KINK_RADIUS {
                        skipped += 1;
                        continue;
                    }
                    greek_checks(&terms, model, &mut worst)?;
                }
            }
        }
    }
    Ok(Verdict::new(
        worst.value <= 1e-4,
        format!(
            "max relative gap {:.2e} over {} comparisons ({skipped} contracts near the kink skipped); worst {}",
            worst.value, worst.count, worst.at
        ),
    ))
}

fn greek_identities() -> Result<Verdict> {
    let mut worst = Worst::default();
    let mut names = std::collections::BTreeSet::new();
    for lambda in [0.5, 1.0, 2.0] {
        for (nu, delta) in [(-0.1, 0.1), (0.05, 0.2), (0.0, 0.3)] {
            let model = AssetModel::pure_jump(lambda, nu, delta)?;
            for strike in [80.0, 90.0, 110.0, 120.0] {
                for tau in [0.5, 1.0] {
                    let terms = contract(100.0, strike, tau, 0.03, 0.01, OptionKind::Call);
                    if l_parameter(&terms, &model).abs() < KINK_RADIUS {
                        continue;
                    }
                    for id in identity_report(&terms, &model, &quad())? {
                        names.insert(id.name);
                        worst.record(id.residual, || format!("{} at {model:?} K={strike}", id.name));
                    }
                }
            }
        }
    }
    Ok(Verdict::new(
        worst.value <= 1e-4,
        format!("max relative residual {:.2e} over {} evaluations of {} identities", worst.value, worst.count, names.len()),
    ))
}

fn diffusion_limit() -> Result<Verdict> {
    let rows = diffusion_convergence(&DiffusionStudy::default(), &quad())?;
    let monotone = rows.windows(2).all(|w| {
        w[1].price_error <= w[0].price_error && w[1].theta_error <= w[0].theta_error && w[1].bond_error <= w[0].bond_error
    });
    let last = rows.last().expect("study has scales");
    let pass = monotone && last.scale == 1000.0 && last.price_error <= 1e-2 && last.theta_error <= 1e-2 && last.bond_error <= 5e-3;
    let trail: Vec<String> = rows.iter().map(|r| format!("{:.1e}", r.price_error)).collect();
    Ok(Verdict::new(
        pass,
        format!(
            "price errors [{}]; at n=1000 theta {:.2e}, bond A {:.2e}; monotone {monotone}",
            trail.join(", "),
            last.theta_error,
            last.bond_error
        ),
    ))
}

fn term_structure() -> Result<Verdict> {
    let q = quad();
    let models = [RateModel::new(0.5, 0.03, 0.01, 2.0, 0.01, 0.02)?, RateModel::new(1.2, 0.05, 0.02, 0.7, -0.01, 0.03)?];
    let mut pide = Worst::default();
    let mut ode_a = Worst::default();
    let mut ode_b = Worst::default();
    let mut terminal_exact = true;
    for model in &models {
        for variant in BondVariant::ALL {
            let rep = bond_pide_residual(model, variant, 5.0, &[0.5, 2.0, 4.0], &[-0.01, 0.03, 0.07], FdSteps::default(), 64, &q)?;
            pide.record(rep.max_residual, || format!("{variant} {model:?}"));
            let ode = ode_residual(model, 0.0, 5.0, variant, &q)?;
            ode_a.record(ode.a_equation, || format!("{variant}"));
            ode_b.record(ode.b_equation, || format!("{variant}"));
            let at_maturity = bond_price(model, &BondTerms::new(5.0, 5.0, 0.04)?, variant, &q)?;
            terminal_exact &= at_maturity.value == 1.0 && at_maturity.a_term == 0.0 && at_maturity.b_term == 0.0;
        }
        terminal_exact &= b_factor(model, 5.0, 5.0)? == 0.0
            && a_shot(model, 5.0, 5.0, &q)? == 0.0
            && a_vasicek(model, 5.0, 5.0)? == 0.0
            && a_general(model, 5.0, 5.0, &q)? == 0.0;
    }
    // Without jumps the shot variant reduces to a first-order equation.
    let drift_only = RateModel::new(0.5, 0.03, 0.01, 0.0, 0.01, 0.02)?;
    let first_order = bond_pide_residual(&drift_only, BondVariant::Shot, 5.0, &[0.5, 2.0], &[0.01, 0.05], FdSteps::default(), 64, &q)?;
    let pass = pide.value <= 1e-4
        && first_order.max_residual <= 1e-6
        && ode_a.value <= 1e-6
        && ode_b.value <= 1e-6
        && terminal_exact;
    Ok(Verdict::new(
        pass,
        format!(
            "bond equation {:.2e} (jump-free {:.2e}); ODE A {:.2e}, B {:.2e}; terminal values exact {terminal_exact}",
            pide.value, first_order.max_residual, ode_a.value, ode_b.value
        ),
    ))
}

fn moment_coincidence() -> Result<Verdict> {
    let model = RateModel::new(0.5, 0.0, 0.0, 2.0, 0.01, 0.02)?;
    let (r0, horizon) = (0.03, 1.0);
    let moments = conditional_moments(&model, r0, horizon)?;
    // Vasicek conditional moments with the matched level and volatility.
    let a = 0.5_f64;
    let level = 2.0 * 0.01 / a;
    let vol2 = 2.0 * (0.01 * 0.01 + 0.02 * 0.02);
    let decay = (-a * horizon).exp();
    let mean = level + (r0 - level) * decay;
    let variance = vol2 / (2.0 * a) * (1.0 - decay * decay);
    let algebra = ((moments.mean - mean) / mean).abs().max(((moments.variance - variance) / variance).abs());
    let matched = conditional_moments(&model.diffusion_equivalent(), r0, horizon)?;
    let matched_gap = (matched.mean - moments.mean).abs().max((matched.variance - moments.variance).abs());

    let est = mc_rate_moments(&model, r0, horizon, &SimConfig::new(1_000_000, 7, false)?)?;
    let z_mean = est.mean.z_score(moments.mean).abs();
    let z_var = est.variance.z_score(moments.variance).abs();
    Ok(Verdict::new(
        algebra <= 1e-14 && matched_gap <= 1e-15 && z_mean <= 3.0 && z_var <= 3.0,
        format!(
            "vs Vasicek formulas {algebra:.1e} (relative), vs matched model {matched_gap:.1e}; MC |z| mean {z_mean:.2}, variance {z_var:.2}"
        ),
    ))
}

fn option_equation() -> Result<Verdict> {
    let q = quad();
    let log_spots = [-0.15, -0.05, 0.05, 0.15];
    let maturities = [0.5, 1.0, 2.0];
    let mut worst = Worst::default();
    let mut excluded = 0;
    for model in [AssetModel::pure_jump(1.0, 0.05, 0.1)?, AssetModel::new(0.5, 0.05, 0.1, 0.15)?] {
        for kind in [OptionKind::Call, OptionKind::Put] {
            let anchor = contract(100.0, 100.0, 1.0, 0.05, 0.0, kind);
            let rep = option_pide_residual(&anchor, &model, &log_spots, &maturities, FdSteps::default(), 64, &q)?;
            excluded += rep.excluded.len();
            worst.record(rep.max_residual, || format!("{model:?} {} at {:?}", kind.name(), rep.worst_at));
        }
    }
    let diffusion = AssetModel::new(0.0, 0.0, 0.0, 0.2)?;
    let anchor = contract(100.0, 100.0, 1.0, 0.05, 0.0, OptionKind::Call);
    let bs = option_pide_residual(&anchor, &diffusion, &log_spots, &maturities, FdSteps::default(), 64, &q)?;
    Ok(Verdict::new(
        worst.value <= 1e-4 && bs.max_residual <= 1e-6,
        format!(
            "jump models {:.2e} over {} points ({excluded} kink points excluded); lambda=0 {:.2e}",
            worst.value,
            worst.count * log_spots.len() * maturities.len() - excluded,
            bs.max_residual
        ),
    ))
}

fn run_cli(args: &[&str], out: &Path) -> std::io::Result<(bool, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_shotnoise")).args(args).arg("--out").arg(out).status()?;
    Ok((status.success(), std::fs::read(out)?))
}

fn reproducibility() -> Result<Verdict> {
    let dir = std::env::temp_dir().join(format!("shotnoise-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let runs: [&[&str]; 4] = [
        &["mc", "--seed", "2024", "--paths", "200000"],
        &["mc", "--seed", "2024", "--paths", "200000", "--format", "json"],
        &["price", "--backend", "fourier"],
        &["greeks"],
    ];
    let mut identical = 0;
    let mut failed = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let first = run_cli(args, &dir.join(format!("{i}-a")));
        let second = run_cli(args, &dir.join(format!("{i}-b")));
        match (first, second) {
            (Ok((true, a)), Ok((true, b))) if a == b => identical += 1,
            _ => failed.push(args.join(" ")),
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(Verdict::new(
        failed.is_empty(),
        format!("{identical}/{} repeated runs byte-identical{}", runs.len(), if failed.is_empty() { String::new() } else { format!("; differing: {failed:?}") }),
    ))
}

type Criterion = (&'static str, fn() -> Result<Verdict>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("put-call parity", parity),
        ("Black-Scholes reduction", black_scholes_reduction),
        ("pure shot-noise reduction", shot_noise_reduction),
        ("series vs Fourier", backend_cross_validation),
        ("Monte Carlo concordance", monte_carlo),
        ("Greeks vs finite differences", greeks_vs_differences),
        ("theta-kappa relation and Greek identities", greek_identities),
        ("diffusion limit", diffusion_limit),
        ("term-structure identities", term_structure),
        ("rate moment coincidence", moment_coincidence),
        ("option pricing equation residual", option_equation),
        ("CLI reproducibility", reproducibility),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        failures += usize::from(!verdict.pass);
        println!("{} {:>2} {name}: {}", if verdict.pass { "PASS" } else { "FAIL" }, i + 1, verdict.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

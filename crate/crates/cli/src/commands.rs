//! One function per subcommand. Each returns the report table and any contract failures.

use anyhow::Result;
use shotnoise::{
    backend_agreement, bond_pide_residual, bond_price, common_greeks, conditional_moments, diffusion_convergence,
    identity_report, jump_greeks, l_parameter, mc_bond_price, mc_option_price, mc_rate_moments,
    option_pide_residual, ode_residual, parity_report, price, zero_yield, AgreementGrid, AssetModel, BondTerms,
    BondVariant, DiffusionStudy, FdSteps, McEstimate, OptionKind, OptionTerms, PricingError, RateModel, KINK_RADIUS,
};

use crate::config::{McTarget, RunConfig};
use crate::report::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// European option prices over the contract grid.
    Price,
    /// Sensitivities, including those to the jump intensity, mean and dispersion.
    Greeks,
    /// Zero-coupon bond prices and their affine coefficients.
    Bond,
    /// Bond prices and zero yields across maturities.
    Curve,
    /// Monte Carlo estimates next to their closed forms.
    Mc,
    /// Residual and agreement checks against their tolerances.
    Validate,
    /// Convergence of the jump models to their diffusion limits.
    Limits,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Price => "price",
            Self::Greeks => "greeks",
            Self::Bond => "bond",
            Self::Curve => "curve",
            Self::Mc => "mc",
            Self::Validate => "validate",
            Self::Limits => "limits",
        }
    }
}

pub struct Outcome {
    pub table: Table,
    /// Human-readable descriptions of every check that missed its tolerance.
    pub failures: Vec<String>,
}

impl Outcome {
    fn report(table: Table) -> Self {
        Self { table, failures: Vec::new() }
    }
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Price => run_price(cfg),
        Command::Greeks => run_greeks(cfg),
        Command::Bond => run_bond(cfg),
        Command::Curve => run_curve(cfg),
        Command::Mc => run_mc(cfg),
        Command::Validate => run_validate(cfg),
        Command::Limits => run_limits(cfg),
    }
}

const OPTION_COLUMNS: [&str; 10] = ["S", "K", "tau", "r", "q", "lambda", "nu", "delta", "sigma", "kind"];
const BOND_COLUMNS: [&str; 9] = ["t", "T", "r_t", "a", "b", "sigma_r", "lambda_r", "nu_r", "delta_r"];

fn columns(prefix: &[&'static str], rest: &[&'static str]) -> Vec<&'static str> {
    prefix.iter().chain(rest).copied().collect()
}

fn option_cells(terms: &OptionTerms, model: &AssetModel) -> Vec<Cell> {
    vec![
        terms.spot().into(),
        terms.strike().into(),
        terms.tau().into(),
        terms.rate().into(),
        terms.dividend().into(),
        model.lambda().into(),
        model.nu().into(),
        model.delta().into(),
        model.sigma().into(),
        terms.kind().name().into(),
    ]
}

fn bond_cells(terms: &BondTerms, model: &RateModel) -> Vec<Cell> {
    vec![
        terms.valuation_time().into(),
        terms.maturity().into(),
        terms.short_rate().into(),
        model.mean_reversion().into(),
        model.long_run().into(),
        model.sigma().into(),
        model.lambda().into(),
        model.law().mean().into(),
        model.law().sd().into(),
    ]
}

fn estimate_cells(est: &McEstimate, exact: f64) -> Vec<Cell> {
    vec![est.mean.into(), est.std_error.into(), est.paths_used.into(), exact.into(), est.z_score(exact).into()]
}

fn run_price(cfg: &RunConfig) -> Result<Outcome> {
    let (model, quad, backend) = (cfg.asset_model()?, cfg.quad()?, cfg.backend());
    let mut table = Table::new(&columns(&OPTION_COLUMNS, &["price", "est_error", "backend"]));
    for terms in cfg.contracts()? {
        let result = price(&terms, &model, backend, &quad)?;
        let mut row = option_cells(&terms, &model);
        row.extend([result.value.into(), result.est_error.into(), backend.name().into()]);
        table.push(row);
    }
    Ok(Outcome::report(table))
}

fn run_greeks(cfg: &RunConfig) -> Result<Outcome> {
    let (model, quad, backend) = (cfg.asset_model()?, cfg.quad()?, cfg.backend());
    let rest = [
        "backend", "delta_s", "gamma", "rho", "psi", "theta", "vega", "kappa", "mu", "epsilon", "extension", "status",
    ];
    let mut table = Table::new(&columns(&OPTION_COLUMNS, &rest));
    for terms in cfg.contracts()? {
        let mut row = option_cells(&terms, &model);
        row.push(backend.name().into());
        match common_greeks(&terms, &model, backend, &quad) {
            Ok(g) => {
                let j = jump_greeks(&terms, &model, &quad)?;
                row.extend([
                    g.delta.into(),
                    g.gamma.into(),
                    g.rho.into(),
                    g.psi.into(),
                    g.theta.into(),
                    g.vega.into(),
                    j.kappa.into(),
                    j.mu.into(),
                    j.epsilon.into(),
                    j.extension.into(),
                    "ok".into(),
                ]);
            }
            Err(PricingError::AtomKink { delta_jump, .. }) => {
                row.extend(std::iter::repeat(Cell::Empty).take(10));
                row.push(format!("kink: delta jumps by {delta_jump:.16e}").into());
            }
            Err(e) => return Err(e.into()),
        }
        table.push(row);
    }
    Ok(Outcome::report(table))
}

fn run_bond(cfg: &RunConfig) -> Result<Outcome> {
    let (model, quad) = (cfg.rate_model()?, cfg.quad()?);
    let mut table = Table::new(&columns(&BOND_COLUMNS, &["variant", "price", "a_term", "b_term"]));
    for terms in cfg.bonds()? {
        for variant in cfg.bond.variant.variants() {
            let p = bond_price(&model, &terms, variant, &quad)?;
            let mut row = bond_cells(&terms, &model);
            row.extend([variant.name().into(), p.value.into(), p.a_term.into(), p.b_term.into()]);
            table.push(row);
        }
    }
    Ok(Outcome::report(table))
}

fn run_curve(cfg: &RunConfig) -> Result<Outcome> {
    let (model, quad) = (cfg.rate_model()?, cfg.quad()?);
    let mut table = Table::new(&columns(&BOND_COLUMNS, &["variant", "tenor", "price", "zero_yield"]));
    for terms in cfg.bonds()? {
        for variant in cfg.bond.variant.variants() {
            let p = bond_price(&model, &terms, variant, &quad)?;
            let tenor = terms.tenor();
            let y = if tenor > 0.0 { Some(zero_yield(p.value, tenor)?) } else { None };
            let mut row = bond_cells(&terms, &model);
            row.extend([variant.name().into(), tenor.into(), p.value.into(), y.into()]);
            table.push(row);
        }
    }
    Ok(Outcome::report(table))
}

const ESTIMATE_COLUMNS: [&str; 5] = ["mc_mean", "std_error", "paths", "analytic", "z_score"];

fn run_mc(cfg: &RunConfig) -> Result<Outcome> {
    let (sim, quad) = (cfg.sim()?, cfg.quad()?);
    let mut failures = Vec::new();
    let mut check = |label: String, est: &McEstimate, exact: f64| {
        if est.z_score(exact).abs() > 3.0 {
            failures.push(format!("{label}: z = {:.3}", est.z_score(exact)));
        }
    };
    let table = match cfg.sim.target {
        McTarget::Option => {
            let (model, backend) = (cfg.asset_model()?, cfg.backend());
            let mut table = Table::new(&columns(&OPTION_COLUMNS, &columns(&["seed"], &ESTIMATE_COLUMNS)));
            for terms in cfg.contracts()? {
                let est = mc_option_price(&terms, &model, &sim)?;
                let exact = price(&terms, &model, backend, &quad)?.value;
                check(format!("{} K={} tau={}", terms.kind().name(), terms.strike(), terms.tau()), &est, exact);
                let mut row = option_cells(&terms, &model);
                row.push(sim.seed().into());
                row.extend(estimate_cells(&est, exact));
                table.push(row);
            }
            table
        }
        McTarget::Bond => {
            let model = cfg.rate_model()?;
            let mut table = Table::new(&columns(&BOND_COLUMNS, &columns(&["variant", "seed"], &ESTIMATE_COLUMNS)));
            for terms in cfg.bonds()? {
                for variant in cfg.bond.variant.variants() {
                    let est = mc_bond_price(&model, &terms, variant, &sim)?;
                    let exact = bond_price(&model, &terms, variant, &quad)?.value;
                    check(format!("{} T={}", variant.name(), terms.maturity()), &est, exact);
                    let mut row = bond_cells(&terms, &model);
                    row.extend([variant.name().into(), sim.seed().into()]);
                    row.extend(estimate_cells(&est, exact));
                    table.push(row);
                }
            }
            table
        }
        McTarget::RateMoments => {
            let model = cfg.rate_model()?;
            let (r0, horizon) = (cfg.bond.short_rate, cfg.sim.horizon);
            let rest = columns(&["horizon", "moment", "seed"], &ESTIMATE_COLUMNS);
            let mut table = Table::new(&columns(&BOND_COLUMNS[2..], &rest));
            let est = mc_rate_moments(&model, r0, horizon, &sim)?;
            let exact = conditional_moments(&model, r0, horizon)?;
            for (name, e, x) in [("mean", est.mean, exact.mean), ("variance", est.variance, exact.variance)] {
                check(format!("rate {name}"), &e, x);
                let terms = BondTerms::new(0.0, horizon, r0)?;
                let mut row = bond_cells(&terms, &model)[2..].to_vec();
                row.extend([horizon.into(), name.into(), sim.seed().into()]);
                row.extend(estimate_cells(&e, x));
                table.push(row);
            }
            table
        }
    };
    Ok(Outcome { table, failures })
}

/// Interior grid for the option equation, in log-moneyness and maturity.
const PIDE_LOG_SPOTS: [f64; 4] = [-0.15, -0.05, 0.05, 0.15];
const PIDE_MATURITIES: [f64; 3] = [0.5, 1.0, 2.0];
const HERMITE_NODES: usize = 64;
const BOND_MATURITY: f64 = 5.0;
const BOND_TIMES: [f64; 3] = [0.5, 2.0, 4.0];
const BOND_RATES: [f64; 3] = [-0.01, 0.03, 0.07];

struct Checks {
    table: Table,
    failures: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self { table: Table::new(&["check", "value", "tolerance", "pass", "points"]), failures: Vec::new() }
    }

    fn record(&mut self, name: String, value: f64, tolerance: f64, points: usize) {
        let pass = value <= tolerance;
        if !pass {
            self.failures.push(format!("{name}: {value:e} exceeds {tolerance:e}"));
        }
        self.table.push(vec![name.into(), value.into(), tolerance.into(), pass.into(), points.into()]);
    }
}

fn run_validate(cfg: &RunConfig) -> Result<Outcome> {
    let (model, quad, backend) = (cfg.asset_model()?, cfg.quad()?, cfg.backend());
    let rates = cfg.rate_model()?;
    let contracts = cfg.contracts()?;
    let mut checks = Checks::new();

    let parity = parity_report(&contracts, std::slice::from_ref(&model), backend, &quad)?;
    checks.record("parity".into(), parity.max_residual, 1e-8, parity.points);

    let agreement = backend_agreement(&AgreementGrid::default(), &quad)?;
    checks.record("backend_agreement".into(), agreement.max_residual, 1e-7, agreement.points);

    if model.sigma() > 0.0 || model.delta() > 0.0 || model.lambda() == 0.0 {
        let strike = contracts.first().map_or(100.0, OptionTerms::strike);
        for kind in [OptionKind::Call, OptionKind::Put] {
            let anchor = OptionTerms::new(strike, strike, 1.0, cfg.contracts.rate, cfg.contracts.dividend, kind)?;
            let rep = option_pide_residual(
                &anchor,
                &model,
                &PIDE_LOG_SPOTS,
                &PIDE_MATURITIES,
                FdSteps::default(),
                HERMITE_NODES,
                &quad,
            )?;
            checks.record(format!("option_pide_{}", kind.name()), rep.max_residual, 1e-4, rep.points);
        }
    }

    for variant in BondVariant::ALL {
        let rep = bond_pide_residual(
            &rates,
            variant,
            BOND_MATURITY,
            &BOND_TIMES,
            &BOND_RATES,
            FdSteps::default(),
            HERMITE_NODES,
            &quad,
        )?;
        checks.record(format!("bond_pide_{}", variant.name()), rep.max_residual, 1e-4, rep.points);
        let ode = ode_residual(&rates, 0.0, BOND_MATURITY, variant, &quad)?;
        checks.record(format!("ode_b_{}", variant.name()), ode.b_equation, 1e-6, ode.points);
        checks.record(format!("ode_a_{}", variant.name()), ode.a_equation, 1e-6, ode.points);
        let terminal = bond_price(&rates, &BondTerms::new(BOND_MATURITY, BOND_MATURITY, 0.03)?, variant, &quad)?;
        let gap = terminal.a_term.abs().max(terminal.b_term.abs()).max((terminal.value - 1.0).abs());
        checks.record(format!("terminal_{}", variant.name()), gap, 0.0, 1);
    }

    if model.sigma() == 0.0 && model.lambda() > 0.0 {
        let mut worst = 0.0_f64;
        let mut points = 0;
        for terms in contracts.iter().filter(|t| l_parameter(t, &model).abs() >= KINK_RADIUS) {
            for id in identity_report(terms, &model, &quad)? {
                worst = worst.max(id.residual);
                points += 1;
            }
        }
        checks.record("greek_identities".into(), worst, 1e-4, points);
    }

    Ok(Outcome { table: checks.table, failures: checks.failures })
}

fn run_limits(cfg: &RunConfig) -> Result<Outcome> {
    let quad = cfg.quad()?;
    let rows = diffusion_convergence(&DiffusionStudy::default(), &quad)?;
    let mut table =
        Table::new(&["scale", "lambda", "matched_sigma", "price_error", "theta_error", "bond_error"]);
    let mut failures = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        table.push(vec![
            row.scale.into(),
            row.lambda.into(),
            row.matched_sigma.into(),
            row.price_error.into(),
            row.theta_error.into(),
            row.bond_error.into(),
        ]);
        if let Some(prev) = i.checked_sub(1).map(|j| &rows[j]) {
            for (name, now, before) in [
                ("price", row.price_error, prev.price_error),
                ("theta", row.theta_error, prev.theta_error),
                ("bond", row.bond_error, prev.bond_error),
            ] {
                if now > before {
                    failures.push(format!("{name} error grows from scale {} to {}", prev.scale, row.scale));
                }
            }
        }
    }
    if let Some(last) = rows.last() {
        for (name, err, tol) in
            [("price", last.price_error, 1e-2), ("theta", last.theta_error, 1e-2), ("bond", last.bond_error, 5e-3)]
        {
            if err > tol {
                failures.push(format!("{name} error {err:e} at scale {} exceeds {tol:e}", last.scale));
            }
        }
    }
    Ok(Outcome { table, failures })
}

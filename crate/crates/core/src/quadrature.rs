//! Numerical settings and the Gauss rules used by the transform and bond routines.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;

use crate::error::{require, PricingError, Result};

/// Accuracy controls shared by both transform backends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Target accuracy; the Poisson tail and the frequency tail are cut at `rel_tol / 10`.
    pub rel_tol: f64,
    /// Frequency cutoff for Fourier inversion; `None` derives it from the integrand envelope.
    pub k_max: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    pub k_nodes: usize,
    /// Hard cap on the number of Poisson terms.
    pub n_max: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            k_max: None,
            k_nodes: 16,
            n_max: 20_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        require(
            self.rel_tol.is_finite() && self.rel_tol > 0.0 && self.rel_tol <= 1e-2,
            "rel_tol",
            || format!("must lie in (0, 1e-2], got {}", self.rel_tol),
        )?;
        if let Some(k) = self.k_max {
            require(k.is_finite() && k > 0.0, "k_max", || {
                format!("must be finite and positive, got {k}")
            })?;
        }
        require(self.k_nodes >= 16, "k_nodes", || {
            format!("must be at least 16, got {}", self.k_nodes)
        })?;
        require(self.n_max >= 1, "n_max", || "must be at least 1".into())?;
        Ok(())
    }

    /// Target for truncated tails.
    pub(crate) fn tail_target(&self) -> f64 {
        self.rel_tol / 10.0
    }
}

/// Node/weight pairs on `[-1, 1]`.
pub(crate) type Rule = Arc<[(f64, f64)]>;

fn cached(table: &'static OnceLock<Mutex<HashMap<usize, Rule>>>, n: usize, build: fn(usize) -> Rule) -> Rule {
    let map = table.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap_or_else(|p| p.into_inner());
    guard.entry(n).or_insert_with(|| build(n)).clone()
}

/// Gauss–Legendre rule with `n` nodes on `[-1, 1]`.
pub(crate) fn legendre(n: usize) -> Rule {
    static TABLE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    cached(&TABLE, n, |n| {
        let rule = GaussLegendre::new(NonZeroUsize::new(n.max(2)).expect("n >= 2"));
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into()
    })
}

/// Gauss–Hermite rule with `n` nodes for the weight `exp(-x^2)`.
pub(crate) fn hermite(n: usize) -> Rule {
    static TABLE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    cached(&TABLE, n, |n| {
        let rule = GaussHermite::new(NonZeroUsize::new(n.max(2)).expect("n >= 2"));
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into()
    })
}

/// Applies `rule` on `[a, b]`.
pub(crate) fn apply(rule: &[(f64, f64)], a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// `E[g(X)]` for `X ~ N(mean, sd^2)` by `n`-node Gauss–Hermite.
pub fn gaussian_expectation(n: usize, mean: f64, sd: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
    if sd == 0.0 {
        return g(mean);
    }
    let rule = hermite(n);
    let scale = std::f64::consts::SQRT_2 * sd;
    rule.iter().map(|&(x, w)| w * g(mean + scale * x)).sum::<f64>() / std::f64::consts::PI.sqrt()
}

/// Adaptive bisection with 16-node panels until the panel/halves discrepancy meets
/// `rel_tol` relative to the running integral.
pub fn adaptive_legendre(a: f64, b: f64, rel_tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 40;
    if a == b {
        return Ok(0.0);
    }
    let rule = legendre(16);
    let whole = apply(&rule, a, b, &f);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut worst: f64 = 0.0;
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = apply(&rule, lo, mid, &f);
        let right = apply(&rule, mid, hi, &f);
        let refined = left + right;
        let err = (refined - est).abs();
        let share = (hi - lo) / (b - a).abs();
        if err <= rel_tol * scale * share.abs().max(1e-3) || err <= 1e-300 {
            total += refined;
            worst = worst.max(err);
        } else if depth >= MAX_DEPTH {
            return Err(PricingError::ToleranceNotMet {
                backend: "adaptive Gauss-Legendre",
                target: rel_tol,
                achieved: err / scale,
            });
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    crate::error::ensure_finite(total, "adaptive quadrature")
}

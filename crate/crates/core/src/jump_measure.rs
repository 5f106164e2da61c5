//! Gaussian jump-size law and the functionals of it that enter the pricing formulas.
//!
//! The compensator is `varsigma = E[e^eta] - 1` and the jump transform is
//! `xi(k) = E[e^{i k eta}] - 1`, with the invariants `xi(0) = 0` and
//! `xi(-i) = varsigma`.

use num_complex::Complex64;

use crate::error::{finite_param, nonneg_param, Result};

/// Jump sizes `eta ~ N(nu, delta^2)` applied to the log-price or the short rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianJumpLaw {
    mean: f64,
    sd: f64,
}

impl GaussianJumpLaw {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        Ok(Self {
            mean: finite_param("nu", mean)?,
            sd: nonneg_param("delta", sd)?,
        })
    }

    /// Mean jump size `nu`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Jump-size standard deviation `delta`.
    pub fn sd(&self) -> f64 {
        self.sd
    }

    /// `E[eta^2] = nu^2 + delta^2`.
    pub fn second_moment(&self) -> f64 {
        self.mean * self.mean + self.sd * self.sd
    }

    /// `varsigma = exp(nu + delta^2/2) - 1`.
    pub fn compensator(&self) -> f64 {
        (self.mean + 0.5 * self.sd * self.sd).exp_m1()
    }

    /// `d varsigma / d nu = 1 + varsigma`.
    pub fn compensator_dmean(&self) -> f64 {
        1.0 + self.compensator()
    }

    /// `d varsigma / d delta = delta (1 + varsigma)`.
    pub fn compensator_dsd(&self) -> f64 {
        self.sd * (1.0 + self.compensator())
    }

    /// `xi(k) = exp(i k nu - k^2 delta^2 / 2) - 1` for complex `k`.
    pub fn transform(&self, k: Complex64) -> Complex64 {
        let i = Complex64::i();
        exp_m1(i * k * self.mean - 0.5 * k * k * self.sd * self.sd)
    }

    /// `d xi / d nu = i k (1 + xi)`.
    pub fn transform_dmean(&self, k: Complex64) -> Complex64 {
        Complex64::i() * k * (1.0 + self.transform(k))
    }

    /// `d xi / d delta = -k^2 delta (1 + xi)`.
    pub fn transform_dsd(&self, k: Complex64) -> Complex64 {
        -k * k * self.sd * (1.0 + self.transform(k))
    }

    /// Jump-size density; zero everywhere except at `nu` when `delta = 0`.
    pub fn density(&self, eta: f64) -> f64 {
        if self.sd == 0.0 {
            return 0.0;
        }
        crate::normal::gaussian_pdf(eta, self.mean, self.sd)
    }

    /// `E[exp(-eta y)] = exp(-nu y + delta^2 y^2 / 2)`, the bond-pricing functional.
    pub fn laplace(&self, y: f64) -> f64 {
        (-self.mean * y + 0.5 * self.sd * self.sd * y * y).exp()
    }
}

/// `e^z - 1` without cancellation for small `|z|`.
pub(crate) fn exp_m1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half_sin = (0.5 * y).sin();
    let re = x.exp_m1() * y.cos() - 2.0 * half_sin * half_sin;
    let im = x.exp() * y.sin();
    Complex64::new(re, im)
}

/// Arrival intensity `lambda >= 0` of a Poisson jump stream.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ArrivalRate(f64);

impl ArrivalRate {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self(nonneg_param("lambda", lambda)?))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Drift and variance of the diffusion matched to a jump stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMoments {
    /// `lambda nu`.
    pub drift: f64,
    /// `lambda (nu^2 + delta^2)`.
    pub variance: f64,
}

/// First and second moments of the shot-noise force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceStatistics {
    /// `lambda nu`.
    pub mean: f64,
    /// `lambda (nu^2 + delta^2)`, the weight of the delta-correlated part.
    pub spike_weight: f64,
    /// `(lambda nu)^2`, the constant part of the two-time product.
    pub mean_product: f64,
}

pub fn diffusion_moments(rate: ArrivalRate, law: &GaussianJumpLaw) -> DiffusionMoments {
    DiffusionMoments {
        drift: rate.get() * law.mean(),
        variance: rate.get() * law.second_moment(),
    }
}

pub fn force_statistics(rate: ArrivalRate, law: &GaussianJumpLaw) -> ForceStatistics {
    let mean = rate.get() * law.mean();
    ForceStatistics {
        mean,
        spike_weight: rate.get() * law.second_moment(),
        mean_product: mean * mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauss_quad::legendre::GaussLegendre;
    use proptest::prelude::*;
    use std::num::NonZeroUsize;

    // Direct quadrature of E[g(eta)] against the Gaussian density.
    fn expect(law: &GaussianJumpLaw, g: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussLegendre::new(NonZeroUsize::new(64).unwrap());
        let (lo, hi) = (law.mean() - 14.0 * law.sd(), law.mean() + 14.0 * law.sd());
        let panels = 28;
        let w = (hi - lo) / panels as f64;
        (0..panels)
            .map(|p| {
                let a = lo + w * p as f64;
                rule.integrate(a, a + w, |x| law.density(x) * g(x))
            })
            .sum()
    }

    #[test]
    fn compensator_matches_direct_expectation() {
        for &(nu, delta) in &[(-0.05, 0.15), (0.1, 0.05), (0.0, 0.3), (-0.3, 0.5)] {
            let law = GaussianJumpLaw::new(nu, delta).unwrap();
            let direct = expect(&law, |x| x.exp_m1());
            assert!((law.compensator() - direct).abs() < 1e-12, "{nu} {delta}");
        }
    }

    #[test]
    fn transform_matches_direct_expectation() {
        let law = GaussianJumpLaw::new(-0.05, 0.15).unwrap();
        for &k in &[0.3, 1.0, 4.0, 12.0] {
            let re = expect(&law, |x| (k * x).cos()) - 1.0;
            let im = expect(&law, |x| (k * x).sin());
            let xi = law.transform(Complex64::new(k, 0.0));
            assert!((xi.re - re).abs() < 1e-12 && (xi.im - im).abs() < 1e-12, "{k}");
        }
    }

    #[test]
    fn degenerate_law_is_a_point_mass() {
        let law = GaussianJumpLaw::new(0.2, 0.0).unwrap();
        assert!((law.compensator() - (0.2f64.exp() - 1.0)).abs() < 1e-15);
        let xi = law.transform(Complex64::new(3.0, 0.0));
        assert!((xi - (Complex64::new(0.0, 0.6).exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GaussianJumpLaw::new(0.0, -0.1).is_err());
        assert!(GaussianJumpLaw::new(f64::NAN, 0.1).is_err());
        assert!(ArrivalRate::new(-1.0).is_err());
    }

    #[test]
    fn moments_and_statistics() {
        let law = GaussianJumpLaw::new(-0.05, 0.15).unwrap();
        let rate = ArrivalRate::new(2.0).unwrap();
        let d = diffusion_moments(rate, &law);
        assert!((d.drift + 0.1).abs() < 1e-15);
        assert!((d.variance - 2.0 * 0.025).abs() < 1e-15);
        let f = force_statistics(rate, &law);
        assert_eq!(f.mean, d.drift);
        assert_eq!(f.spike_weight, d.variance);
        assert!((f.mean_product - 0.01).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn transform_anchors(nu in -1.0f64..1.0, delta in 0.0f64..1.0) {
            let law = GaussianJumpLaw::new(nu, delta).unwrap();
            let at_zero = law.transform(Complex64::new(0.0, 0.0));
            prop_assert!(at_zero.norm() < 1e-15);
            let at_minus_i = law.transform(Complex64::new(0.0, -1.0));
            let s = law.compensator();
            prop_assert!((at_minus_i.re - s).abs() <= 1e-12 * (1.0 + s.abs()));
            prop_assert!(at_minus_i.im.abs() < 1e-14);
        }

        #[test]
        fn transform_is_bounded_on_real_axis(nu in -1.0f64..1.0, delta in 0.0f64..1.0, k in -50.0f64..50.0) {
            let law = GaussianJumpLaw::new(nu, delta).unwrap();
            prop_assert!((law.transform(Complex64::new(k, 0.0)) + 1.0).norm() <= 1.0 + 1e-14);
        }

        #[test]
        fn analytic_derivatives_match_differences(nu in -0.5f64..0.5, delta in 0.05f64..0.8, k in -5.0f64..5.0) {
            let h = 1e-6;
            let kc = Complex64::new(k, 0.0);
            let law = GaussianJumpLaw::new(nu, delta).unwrap();
            let up = GaussianJumpLaw::new(nu + h, delta).unwrap();
            let dn = GaussianJumpLaw::new(nu - h, delta).unwrap();
            let fd = (up.compensator() - dn.compensator()) / (2.0 * h);
            prop_assert!((fd - law.compensator_dmean()).abs() < 1e-7);
            let fdx = (up.transform(kc) - dn.transform(kc)) / (2.0 * h);
            prop_assert!((fdx - law.transform_dmean(kc)).norm() < 1e-6);
            let up = GaussianJumpLaw::new(nu, delta + h).unwrap();
            let dn = GaussianJumpLaw::new(nu, delta - h).unwrap();
            let fd = (up.compensator() - dn.compensator()) / (2.0 * h);
            prop_assert!((fd - law.compensator_dsd()).abs() < 1e-7);
            let fdx = (up.transform(kc) - dn.transform(kc)) / (2.0 * h);
            prop_assert!((fdx - law.transform_dsd(kc)).norm() < 1e-6);
        }
    }
}

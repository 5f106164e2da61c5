//! Standard normal density and distribution function.

use std::f64::consts::PI;

use libm::erfc;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function, accurate in both tails.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Density of `N(mean, sd^2)` at `x`; `sd` must be positive.
#[inline]
pub fn gaussian_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    pdf((x - mean) / sd) / sd
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(cdf(0.0), 0.5);
        assert!((cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-14);
        assert!((cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-16);
        // Far tail keeps relative accuracy.
        let tail = cdf(-10.0);
        assert!((tail / 7.619_853_024_160_593e-24 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_symmetry() {
        for i in 0..50 {
            let x = -6.0 + 0.25 * i as f64;
            assert!((cdf(x) + cdf(-x) - 1.0).abs() < 1e-15);
        }
    }
}

//! Special-function kernel: Gaussian tail, complementary error functions,
//! log-gamma (real and complex), and the two Meijer G-function instances that
//! appear in the closed-form GSSK pairwise error probability.

mod gamma;
mod meijer;

pub use gamma::{ln_gamma, ln_gamma_complex};
pub use meijer::{meijer_g_2212, meijer_g_3213, mellin_barnes, MELLIN_CONTOUR_RE};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Truncation control for the Meijer series in the closed-form PEP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// A term smaller than this in magnitude ends the summation early.
    pub abs_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 20,
            abs_tol: 1e-10,
        }
    }
}

impl SeriesControl {
    pub fn with_terms(max_terms: usize) -> Self {
        SeriesControl {
            max_terms,
            ..Self::default()
        }
    }
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 25.0 {
        if x < -26.6 {
            return f64::INFINITY;
        }
        return (x * x).exp() * libm::erfc(x);
    }
    // Asymptotic series; at x >= 25 eight terms are good to well below 1e-16.
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=8 {
        term *= -((2 * n - 1) as f64) * inv2x2;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// Standard Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Composite Gauss-Legendre (5 points) of the standard normal density over [x, x + 40].
    fn gaussian_tail_by_quadrature(x: f64) -> f64 {
        const NODES: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let panels = 4000;
        let width = 40.0 / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = x + (p as f64 + 0.5) * width;
            for (n, w) in NODES.iter().zip(WEIGHTS) {
                let t = mid + 0.5 * width * n;
                sum += w * 0.5 * width * (-0.5 * t * t).exp();
            }
        }
        sum / (2.0 * PI).sqrt()
    }

    #[test]
    fn q_function_values() {
        assert_eq!(q_function(0.0), 0.5);
        assert_eq!(q_function(f64::INFINITY), 0.0);
        assert_eq!(q_function(f64::NEG_INFINITY), 1.0);
        let oracle = gaussian_tail_by_quadrature(1.0);
        assert!((oracle - 0.158_655_253_931_457).abs() < 1e-13);
        assert!((q_function(1.0) - oracle).abs() < 1e-14);
        for x in [-3.0, 0.5, 2.5, 5.0, 7.9] {
            assert!((q_function(x) - gaussian_tail_by_quadrature(x)).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn q_function_symmetry() {
        let mut x = -8.0;
        while x <= 8.0 {
            assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-14, "x = {x}");
            x += 0.125;
        }
    }

    #[test]
    fn erfcx_is_continuous_across_branches() {
        // Reference values from 30-digit arithmetic on either side of the switch.
        #[allow(clippy::excessive_precision)]
        for (x, want) in [
            (20.0, 0.028_174_348_741_051_319_3),
            (24.999_999_999, 0.022_549_572_433_541_904_5),
            (25.0, 0.022_549_572_432_641_358_9),
            (26.0, 0.021_683_584_850_562_906_6),
        ] {
            assert!((erfcx(x) - want).abs() / want < 1e-13, "x = {x}");
        }
        // erfcx(x) ~ 1 / (x sqrt(pi)) for large x.
        let big = 1e6;
        assert!((erfcx(big) * big * PI.sqrt() - 1.0).abs() < 1e-11);
        assert!((erfcx(0.0) - 1.0).abs() < 1e-16);
        assert!((erfcx(1.0) - 0.427_583_576_155_807).abs() < 1e-14);
    }
}

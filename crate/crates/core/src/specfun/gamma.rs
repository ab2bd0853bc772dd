use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Principal-ish branch of `ln Gamma(z)` on the complex plane.
///
/// Only `exp` of the result is meaningful: the imaginary part may differ from
/// the principal branch by a multiple of `2 pi`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_gamma_complex(z.conj()).conj();
    }
    if z.re < 0.5 {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

// ln sin(pi z) for Im z >= 0, stable when Im z is large.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 1.0 {
        return (PI * z).sin().ln();
    }
    let i = Complex64::i();
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    let small = (2.0 * i * PI * z).exp();
    Complex64::new(0.5f64.ln(), 0.5 * PI) - i * PI * z + (1.0 - small).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a.exp() - b.exp()).norm() <= tol * b.exp().norm()
    }

    #[test]
    fn real_axis_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..30 {
            let got = ln_gamma_complex(Complex64::new(n as f64, 0.0));
            assert!((got.re - fact.ln()).abs() < 1e-12 * fact.ln().abs().max(1.0), "n = {n}");
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12 * fact.ln().abs().max(1.0));
            fact *= n as f64;
        }
        let half = ln_gamma_complex(Complex64::new(0.5, 0.0));
        assert!((half.re - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &(x, y) in &[(0.25, 3.0), (-2.3, 0.7), (1.5, -40.0), (-0.75, 25.0), (6.0, 80.0)] {
            let z = Complex64::new(x, y);
            // Gamma(z + 1) = z Gamma(z)
            let lhs = ln_gamma_complex(z + 1.0);
            let rhs = ln_gamma_complex(z) + z.ln();
            assert!(close(lhs, rhs, 1e-12), "z = {z}");
        }
    }

    #[test]
    fn modulus_on_critical_lines() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for y in [0.3, 2.0, 10.0, 60.0] {
            let v = ln_gamma_complex(Complex64::new(0.5, y)).re;
            let want = 0.5 * (PI.ln() - (PI * y).cosh().ln());
            assert!((v - want).abs() < 1e-12 * want.abs().max(1.0), "y = {y}");
        }
        // |Gamma(iy)|^2 = pi / (y sinh(pi y))
        for y in [0.5, 4.0, 30.0] {
            let v = ln_gamma_complex(Complex64::new(0.0, y)).re;
            let want = 0.5 * (PI.ln() - y.ln() - (PI * y).sinh().ln());
            assert!((v - want).abs() < 1e-12 * want.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = Complex64::new(0.3, 7.5);
        assert_eq!(ln_gamma_complex(z.conj()), ln_gamma_complex(z).conj());
    }
}

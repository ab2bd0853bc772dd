//! Meijer G-functions evaluated as Mellin-Barnes contour integrals.
//!
//! Along the vertical line `s = c + it` the integrand decays exponentially in
//! `|t|`, so the trapezoid rule converges geometrically in the step size.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use crate::error::{Error, Result};

/// Real part of the integration contour; it separates the poles of
/// `Gamma(s)` (at `s <= 0`) from those of `Gamma(1/2 - s)` (at `s >= 1/2`).
pub const MELLIN_CONTOUR_RE: f64 = 0.25;

const DECAY_CUTOFF: f64 = 1e-18;
const SCAN_STEP: f64 = 0.25;
const MAX_T: f64 = 4000.0;
const STEP_TOL: f64 = 1e-11;
const MAX_HALVINGS: usize = 8;
const IMAG_TOL: f64 = 1e-10;

/// `(1 / 2 pi i) * integral of exp(log_kernel(s)) * z^{-s} ds` along `Re s = c`.
///
/// The result is complex; callers with real kernels check the imaginary part.
pub fn mellin_barnes<F>(log_kernel: F, z: f64, c: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::arg(format!("Meijer G argument must be positive and finite, got {z}")));
    }
    let ln_z = z.ln();
    let f = |t: f64| -> Complex64 {
        let s = Complex64::new(c, t);
        (log_kernel(s) - s * ln_z).exp()
    };

    let mut peak = f(0.0).norm();
    let mut reach = [0.0f64; 2];
    for (side, sign) in [1.0, -1.0].into_iter().enumerate() {
        let mut quiet = 0;
        let mut t = 0.0;
        while quiet < 8 {
            t += SCAN_STEP;
            if t > MAX_T {
                return Err(Error::Numerical(format!(
                    "contour integrand does not decay (z = {z})"
                )));
            }
            let v = f(sign * t).norm();
            if !v.is_finite() {
                return Err(Error::Numerical(format!("non-finite contour integrand at t = {}", sign * t)));
            }
            peak = peak.max(v);
            quiet = if v < DECAY_CUTOFF * peak { quiet + 1 } else { 0 };
        }
        reach[side] = t;
    }
    if peak == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }

    let t_max = reach[0].max(reach[1]);
    let mut h = 0.125;
    let mut n = (t_max / h).ceil() as i64;
    let mut sum = f(0.0);
    let mut l1 = sum.norm();
    for k in 1..=n {
        let (a, b) = (f(k as f64 * h), f(-(k as f64) * h));
        sum += a + b;
        l1 += a.norm() + b.norm();
    }
    let mut estimate = sum * h;
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        n *= 2;
        let mut added = Complex64::new(0.0, 0.0);
        for k in (1..n).step_by(2) {
            let (a, b) = (f(k as f64 * h), f(-(k as f64) * h));
            added += a + b;
            l1 += a.norm() + b.norm();
        }
        sum += added;
        let refined = sum * h;
        let scale = l1 * h;
        if (refined - estimate).norm() <= STEP_TOL * scale {
            return Ok(refined / (2.0 * PI));
        }
        estimate = refined;
    }
    Err(Error::Numerical(format!(
        "contour trapezoid did not settle for z = {z}"
    )))
}

fn real_part(value: Complex64, what: &str) -> Result<f64> {
    if value.im.abs() > IMAG_TOL * value.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "{what} has imaginary residue {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Meijer G-function of the first closed-form term, defined by the contour
/// integral of `Gamma(s) Gamma(1/2 - s) Gamma(1 - s) z^{-s}`.
///
/// This equals `(pi / sqrt z) exp(1/z) erfc(1/sqrt z)`.
pub fn meijer_g_2212(z: f64) -> Result<f64> {
    let g = mellin_barnes(
        |s| ln_gamma_complex(s) + ln_gamma_complex(0.5 - s) + ln_gamma_complex(1.0 - s),
        z,
        MELLIN_CONTOUR_RE,
    )?;
    real_part(g, "G(2,1)")
}

/// Meijer `G^{1,3}_{3,2}(z | 1/2, -k/2, -(k+1)/2; 0, -1/2)`, the `k`-th term of
/// the closed-form series.
pub fn meijer_g_3213(z: f64, k: usize) -> Result<f64> {
    let half_k = 0.5 * k as f64;
    let g = mellin_barnes(
        |s| {
            ln_gamma_complex(s)
                + ln_gamma_complex(0.5 - s)
                + ln_gamma_complex(1.0 + half_k - s)
                + ln_gamma_complex(1.5 + half_k - s)
                - ln_gamma_complex(1.5 - s)
        },
        z,
        MELLIN_CONTOUR_RE,
    )?;
    real_part(g, "G(3,2)")
}

//! Globally adaptive Gauss-Kronrod (7/15) integration.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

// Returns (kronrod estimate, error estimate, integral of |f|).
fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = kron.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let err = ((kron - gauss) * half).abs();
    (kron * half, err, abs * half.abs())
}

/// `integral_a^b f(x) dx` to relative tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::arg(format!("finite limits required, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let (value, error, abs) = kronrod(&f, a, b);
    let mut total = value;
    let mut total_err = error;
    let mut total_abs = abs;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    loop {
        if !total.is_finite() {
            return Err(Error::Numerical("integrand produced a non-finite value".into()));
        }
        let target = (tol * total.abs()).max(50.0 * f64::EPSILON * total_abs);
        if total_err <= target || total_abs == 0.0 {
            return Ok(total);
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Numerical(format!(
                "adaptive quadrature hit {MAX_INTERVALS} intervals (error {total_err:e}, value {total:e})"
            )));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1, a1) = kronrod(&f, seg.a, mid);
        let (v2, e2, a2) = kronrod(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        total_abs += a1 + a2;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
}

/// `integral_a^inf f(x) dx` via `x = a + t / (1 - t)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    let g = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + t / one_minus;
        if !x.is_finite() {
            return 0.0;
        }
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-14).unwrap();
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn kinks_and_peaks() {
        let v = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 0.29).abs() < 1e-12);
        let v = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12).unwrap();
        let want = 2.0 * 100.0 * (100.0f64).atan();
        assert!((v - want).abs() < 1e-9 * want);
    }

    #[test]
    fn semi_infinite() {
        let v = integrate_semi_infinite(|x: f64| (-x).exp(), 0.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        let v = integrate_semi_infinite(|x: f64| (-x * x).exp(), 0.0, 1e-13).unwrap();
        assert!((v - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let v = integrate_semi_infinite(|x: f64| 1.0 / (1.0 + x * x), 1.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn rejects_infinite_limits() {
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-8).is_err());
    }
}

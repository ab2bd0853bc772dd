//! Unit-energy PSK alphabets with Gray labelling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Psk {
    points: Vec<Complex64>,
    labels: Vec<u32>,
    bits: u32,
}

impl Psk {
    /// `order`-ary PSK, `order` a power of two. Point `k` sits at angle
    /// `2 pi k / order` and carries the Gray label `k ^ (k >> 1)`.
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::arg(format!("PSK order must be a power of two >= 2, got {order}")));
        }
        let points = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
            .map(|p| Complex64::new(snap(p.re), snap(p.im)))
            .collect();
        let labels = (0..order as u32).map(|k| k ^ (k >> 1)).collect();
        Ok(Psk {
            points,
            labels,
            bits: order.trailing_zeros(),
        })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Bit errors between the labels of two points.
    pub fn bit_errors(&self, sent: usize, decided: usize) -> u32 {
        (self.labels[sent] ^ self.labels[decided]).count_ones()
    }

    /// Index of the point nearest to `x`; ties go to the lower index.
    pub fn nearest(&self, x: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (x - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Distinct nonzero differences `z_a - z_b`, up to rounding.
    pub fn distinct_differences(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for a in &self.points {
            for b in &self.points {
                let d = a - b;
                if d.norm() < 1e-12 {
                    continue;
                }
                if !out.iter().any(|o| (o - d).norm() < 1e-9) {
                    out.push(d);
                }
            }
        }
        out
    }
}

// Remove the 1e-16 dust from cos/sin at multiples of pi/2.
fn snap(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

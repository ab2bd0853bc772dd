//! Transmit mapping (superposition coding + antenna activation) and the three
//! receivers: energy-based antenna detection, coherent ML with known payload,
//! and SIC decoding of the NOMA symbols.

use num_complex::Complex64;

use crate::codebook::AntennaCombination;
use crate::constellation::Psk;
use crate::error::{Error, Result};

/// Power-domain superposition `X = sum_m sqrt(alpha_m P) z_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperposedSymbol {
    pub value: Complex64,
    pub component_symbols: Vec<Complex64>,
}

/// Decisions made by one receiver for one channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub combo_index: usize,
    /// Constellation indices for users `1..=m`, strongest power first.
    pub per_user_symbols: Vec<usize>,
    /// Gray labels of `per_user_symbols`.
    pub per_user_bits: Vec<u32>,
}

impl DetectionResult {
    pub fn new(combo_index: usize, symbols: Vec<usize>, psk: &Psk) -> Self {
        let per_user_bits = symbols.iter().map(|&s| psk.label(s)).collect();
        DetectionResult {
            combo_index,
            per_user_symbols: symbols,
            per_user_bits,
        }
    }
}

pub fn superpose(symbols: &[Complex64], coeffs: &[f64], power: f64) -> Result<SuperposedSymbol> {
    if symbols.len() != coeffs.len() {
        return Err(Error::arg(format!(
            "{} symbols but {} power coefficients",
            symbols.len(),
            coeffs.len()
        )));
    }
    let value = symbols
        .iter()
        .zip(coeffs)
        .map(|(z, a)| z * (a * power).sqrt())
        .sum();
    Ok(SuperposedSymbol {
        value,
        component_symbols: symbols.to_vec(),
    })
}

/// Antenna-domain vector: `X / sqrt(n_t)` on the active antennas, zero elsewhere.
pub fn build_transmit_vector(
    x: &SuperposedSymbol,
    combo: &AntennaCombination,
    n_transmit: usize,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_transmit];
    let per_antenna = x.value / (combo.len() as f64).sqrt();
    for &a in combo.indices() {
        out[a] = per_antenna;
    }
    out
}

/// `sqrt(rho') h_eff X + noise`.
pub fn gssk_receive(h_eff: Complex64, x: &SuperposedSymbol, rho_prime: f64, noise: Complex64) -> Complex64 {
    rho_prime.sqrt() * h_eff * x.value + noise
}

/// Energy-based antenna-set detection. `codebook_energies[k]` is
/// `|h_eff|^2` for entry `k`; the received energy is compared with the
/// expected `rho' P |h_k|^2 + noise_var`.
pub fn detect_energy_ml(
    y0: Complex64,
    codebook_energies: &[f64],
    rho_prime: f64,
    power: f64,
    noise_var: f64,
) -> Result<usize> {
    if codebook_energies.is_empty() {
        return Err(Error::arg("empty codebook energy list"));
    }
    Ok(energy_argmin(y0.norm_sqr(), codebook_energies, rho_prime * power, noise_var))
}

#[inline]
pub(crate) fn energy_argmin(energy: f64, codebook_energies: &[f64], scale: f64, noise_var: f64) -> usize {
    let target = energy - noise_var;
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, &e) in codebook_energies.iter().enumerate() {
        let d = (target - scale * e).abs();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// Coherent detection with the transmitted superposition known at the receiver.
pub fn detect_ideal_ml(y0: Complex64, x_known: Complex64, codebook_gains: &[Complex64], rho_prime: f64) -> usize {
    let s = rho_prime.sqrt() * x_known;
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, &h) in codebook_gains.iter().enumerate() {
        let d = (y0 - s * h).norm_sqr();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// Successive interference cancellation for users `1..=user_rank`.
///
/// `gain` is the complex factor the receiver believes multiplies `X` (for the
/// NOMA downlink that is `sqrt(rho') g_eff`). Returns constellation indices.
pub fn sic_detect(
    r: Complex64,
    gain: Complex64,
    coeffs: &[f64],
    power: f64,
    psk: &Psk,
    user_rank: usize,
) -> Result<Vec<usize>> {
    if user_rank == 0 || user_rank > coeffs.len() {
        return Err(Error::arg(format!("user rank {user_rank} outside 1..={}", coeffs.len())));
    }
    let mut out = Vec::with_capacity(user_rank);
    sic_walk(r, gain, &coeffs[..user_rank], power, psk, |d| out.push(d));
    Ok(out)
}

// Decodes users in order of `coeffs`, reporting each decision; returns the last one.
#[inline]
pub(crate) fn sic_walk(
    r: Complex64,
    gain: Complex64,
    coeffs: &[f64],
    power: f64,
    psk: &Psk,
    mut on_decision: impl FnMut(usize),
) -> usize {
    let mut residual = r;
    let mut best = 0;
    for &alpha in coeffs {
        let a = gain * (alpha * power).sqrt();
        let mut best_d = f64::INFINITY;
        for (i, &z) in psk.points().iter().enumerate() {
            let d = (residual - a * z).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        residual -= a * psk.point(best);
        on_decision(best);
    }
    best
}

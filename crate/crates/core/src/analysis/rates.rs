use crate::channel::ordered_rayleigh_pdf;
use crate::codebook::Codebook;
use crate::config::{DerivedSnr, SystemConfig};
use crate::error::{Error, Result};
use crate::quadrature::integrate_semi_infinite;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRate {
    pub gssk: f64,
    pub noma: f64,
    pub total: f64,
}

/// Spatial-bit throughput `(1 - p) b_H`.
pub fn rate_gssk(p_gssk: f64, codebook: &Codebook) -> f64 {
    (1.0 - p_gssk) * codebook.bits_per_symbol() as f64
}

/// Ergodic rate of the user at rank `m` (1-based), in bit/s/Hz. Weaker-power
/// users already decoded are removed; stronger-rank users' signals count as
/// interference.
pub fn rate_noma_user(m: usize, cfg: &SystemConfig, snr: DerivedSnr) -> Result<f64> {
    let m_users = cfg.n_noma_users;
    if m == 0 || m > m_users || cfg.power_coeffs.len() != m_users {
        return Err(Error::arg(format!("rank {m} outside 1..={m_users}")));
    }
    let alpha = cfg.power_coeffs[m - 1];
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let s = snr.rho_prime * cfg.total_power;
    let rest: f64 = cfg.power_coeffs[m..].iter().sum();
    let noise = cfg.noise_var;
    let n_active = cfg.n_active;
    let integrand = |g: f64| {
        let g2 = g * g;
        let sinr = g2 * alpha * s / (g2 * rest * s + noise);
        sinr.ln_1p() / std::f64::consts::LN_2 * ordered_rayleigh_pdf(g, m, m_users, n_active).unwrap_or(0.0)
    };
    integrate_semi_infinite(integrand, 0.0, 1e-10)
}

/// GSSK, NOMA and total throughput given the error probabilities that scale
/// each rate.
pub fn sum_rate_ngssk(
    cfg: &SystemConfig,
    snr: DerivedSnr,
    p_gssk: f64,
    per_user_pe: &[f64],
) -> Result<SumRate> {
    if per_user_pe.len() != cfg.n_noma_users {
        return Err(Error::arg(format!(
            "{} per-user error rates for {} users",
            per_user_pe.len(),
            cfg.n_noma_users
        )));
    }
    let codebook = crate::codebook::build_codebook(cfg.n_transmit, cfg.n_active)?;
    let gssk = rate_gssk(p_gssk, &codebook);
    let mut noma = 0.0;
    for (i, pe) in per_user_pe.iter().enumerate() {
        noma += (1.0 - pe) * rate_noma_user(i + 1, cfg, snr)?;
    }
    Ok(SumRate {
        gssk,
        noma,
        total: gssk + noma,
    })
}

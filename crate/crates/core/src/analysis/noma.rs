use num_complex::Complex64;

use crate::channel::ordered_second_moment;
use crate::config::{DerivedSnr, SystemConfig};
use crate::constellation::Psk;
use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// How the decision errors of stronger users leak into the SIC residual of a
/// weaker user's bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SicResidue {
    /// Stronger users are always cancelled exactly.
    Perfect,
    /// Each stronger user leaves a residue drawn uniformly from zero and the
    /// distinct constellation differences.
    #[default]
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverallBer {
    pub noma_raw: f64,
    pub system_raw: f64,
    pub noma: f64,
    pub system: f64,
}

fn weighted_cross(delta: Complex64, terms: &[(f64, Complex64)], power: f64) -> f64 {
    let s: Complex64 = terms.iter().map(|&(a, z)| (a * power).sqrt() * z.conj()).sum();
    2.0 * (delta * s).re
}

fn check_common(delta: Complex64, noise_var: f64, power: f64) -> Result<()> {
    if delta.norm() == 0.0 {
        return Err(Error::arg("symbol difference must be nonzero"));
    }
    if !(noise_var > 0.0) || !(power > 0.0) {
        return Err(Error::arg("power and noise variance must be positive"));
    }
    Ok(())
}

/// Averaged PEP of the weakest user, whose decision sees the weaker-power
/// symbols `interferers = [(alpha_j, z_j)]` as interference. `sigma_h2` is the
/// second moment of the user's channel magnitude.
pub fn pep_noma_first_user(
    delta1: Complex64,
    interferers: &[(f64, Complex64)],
    alpha1: f64,
    power: f64,
    noise_var: f64,
    sigma_h2: f64,
) -> Result<f64> {
    check_common(delta1, noise_var, power)?;
    let nu = (alpha1 * power).sqrt() * delta1.norm_sqr() + weighted_cross(delta1, interferers, power);
    let beta2 = 2.0 * delta1.norm_sqr() * noise_var;
    let sh = sigma_h2.sqrt();
    Ok(0.5 * (1.0 - nu * sh / (2.0 * beta2 + nu * nu * sigma_h2).sqrt()))
}

/// Averaged PEP of the user at rank `m` (1-based, weakest first) after SIC.
///
/// `prior_deltas = [(alpha_k, delta_k)]` are decision errors left behind by
/// stronger users, `residual_interferers = [(alpha_j, z_j)]` the not yet
/// decoded weaker-power symbols. The conditional `Q(g eta / (sqrt 2 |delta| sigma))`
/// is averaged exactly over the `m`-th order statistic of `m_users` Rayleigh
/// magnitudes with per-user second moment `omega`.
#[allow(clippy::too_many_arguments)]
pub fn pep_noma_mth_user(
    delta_m: Complex64,
    prior_deltas: &[(f64, Complex64)],
    residual_interferers: &[(f64, Complex64)],
    alpha_m: f64,
    power: f64,
    noise_var: f64,
    m: usize,
    m_users: usize,
    omega: f64,
) -> Result<f64> {
    check_common(delta_m, noise_var, power)?;
    if m == 0 || m > m_users {
        return Err(Error::arg(format!("rank {m} outside 1..={m_users}")));
    }
    let eta = (alpha_m * power).sqrt() * delta_m.norm_sqr()
        + weighted_cross(delta_m, residual_interferers, power)
        + weighted_cross(delta_m, prior_deltas, power);
    let beta2 = 2.0 * delta_m.norm_sqr() * noise_var;
    let ln_lead = ln_gamma(m_users as f64 + 1.0) - ln_gamma(m as f64) - ln_gamma((m_users - m) as f64 + 1.0);
    let lead = ln_lead.exp();
    let mut sum = 0.0;
    for j in 0..m {
        let k = (m_users - m + 1 + j) as f64;
        let choose = (ln_gamma(m as f64) - ln_gamma(j as f64 + 1.0) - ln_gamma((m - 1 - j) as f64 + 1.0)).exp();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let bracket = 1.0 - eta * omega.sqrt() / (eta * eta * omega + 2.0 * k * beta2).sqrt();
        sum += sign * choose / k * 0.5 * bracket;
    }
    Ok(lead * sum)
}

// Calls `f` with every tuple of `len` indices into `0..radix`.
fn for_each_tuple(radix: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < radix {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Union bound on the BER of the user at rank `m`: Gray-weighted pairwise
/// errors averaged over equiprobable symbols, interferer symbols and SIC
/// residues.
pub fn ber_bound_noma_user(
    m: usize,
    cfg: &SystemConfig,
    psk: &Psk,
    snr: DerivedSnr,
    residue: SicResidue,
) -> Result<f64> {
    let m_users = cfg.n_noma_users;
    if m == 0 || m > m_users {
        return Err(Error::arg(format!("rank {m} outside 1..={m_users}")));
    }
    let alphas = &cfg.power_coeffs;
    let power = snr.rho_prime * cfg.total_power;
    let omega = cfg.n_active as f64;
    let sigma_h2 = ordered_second_moment(1, m_users, cfg.n_active)?;
    let mut residues = vec![Complex64::new(0.0, 0.0)];
    if residue == SicResidue::Uniform {
        residues.extend(psk.distinct_differences());
    }
    let order = psk.order();

    let mut total = 0.0;
    for z in 0..order {
        for zhat in 0..order {
            if z == zhat {
                continue;
            }
            let q = psk.bit_errors(z, zhat) as f64;
            let delta = psk.point(z) - psk.point(zhat);
            let mut acc = 0.0;
            let mut count = 0usize;
            let mut failure = None;
            for_each_tuple(order, m_users - m, |weak| {
                let interferers: Vec<(f64, Complex64)> =
                    weak.iter().enumerate().map(|(i, &s)| (alphas[m + i], psk.point(s))).collect();
                for_each_tuple(residues.len(), m - 1, |strong| {
                    let prior: Vec<(f64, Complex64)> =
                        strong.iter().enumerate().map(|(k, &r)| (alphas[k], residues[r])).collect();
                    let p = if m == 1 {
                        pep_noma_first_user(delta, &interferers, alphas[0], power, cfg.noise_var, sigma_h2)
                    } else {
                        pep_noma_mth_user(
                            delta, &prior, &interferers, alphas[m - 1], power, cfg.noise_var, m, m_users, omega,
                        )
                    };
                    match p {
                        Ok(p) => acc += p,
                        Err(e) => failure = Some(e),
                    }
                    count += 1;
                });
            });
            if let Some(e) = failure {
                return Err(e);
            }
            total += q * acc / count as f64;
        }
    }
    Ok(total / (order as f64 * psk.bits_per_symbol() as f64))
}

/// Overall NOMA and system BER from the antenna-index error probability and
/// the per-user NOMA bounds.
pub fn ber_overall(p_gssk: f64, per_user_bounds: &[f64]) -> OverallBer {
    let sum: f64 = per_user_bounds.iter().sum();
    let noma_raw = (1.0 - p_gssk) * sum + p_gssk;
    let system_raw = (1.0 - p_gssk) * sum + 2.0 * p_gssk;
    OverallBer {
        noma_raw,
        system_raw,
        noma: noma_raw.clamp(0.0, 1.0),
        system: system_raw.clamp(0.0, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ordered_rayleigh_pdf;
    use crate::quadrature::integrate_semi_infinite;
    use crate::specfun::q_function;

    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    // Averages the conditional Q-function PEP over the ordered-magnitude density.
    fn averaged_conditional(eta: f64, delta: Complex64, noise_var: f64, m: usize, m_users: usize, n_active: usize) -> f64 {
        let c = eta / (2f64.sqrt() * delta.norm() * noise_var.sqrt());
        integrate_semi_infinite(
            |g| q_function(c * g) * ordered_rayleigh_pdf(g, m, m_users, n_active).unwrap(),
            0.0,
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn first_user_limits() {
        let d = 2.0 * ONE;
        assert!((pep_noma_first_user(d, &[], 1.0, 1e12, 1.0, 1.0).unwrap()).abs() < 1e-5);
        // alpha = 0 makes nu = 0.
        assert!((pep_noma_first_user(d, &[], 0.0, 1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(pep_noma_first_user(Complex64::new(0.0, 0.0), &[], 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn eta_zero_gives_half() {
        for m_users in 1..=4 {
            for m in 1..=m_users {
                let p = pep_noma_mth_user(2.0 * ONE, &[], &[], 0.0, 1.0, 1.0, m, m_users, 2.0).unwrap();
                assert!((p - 0.5).abs() < 1e-12, "M={m_users} m={m}: {p}");
            }
        }
    }

    #[test]
    fn single_user_reduction() {
        let d = Complex64::new(1.0, 1.0);
        for power in [0.1, 1.0, 30.0] {
            let a = pep_noma_mth_user(d, &[], &[], 1.0, power, 0.5, 1, 1, 2.0).unwrap();
            let b = pep_noma_first_user(d, &[], 1.0, power, 0.5, 2.0).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        // Rank 1 of M users is the same as the first-user form with E[g_(1)^2].
        let s = ordered_second_moment(1, 3, 2).unwrap();
        let a = pep_noma_mth_user(d, &[], &[(0.2, ONE)], 0.7, 4.0, 1.0, 1, 3, 2.0).unwrap();
        let b = pep_noma_first_user(d, &[(0.2, ONE)], 0.7, 4.0, 1.0, s).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn matches_numerical_averaging() {
        let d = 2.0 * ONE;
        let power = 10.0;
        for (alphas, n_active) in [(vec![0.8, 0.2], 1usize), (vec![0.7, 0.2, 0.1], 3)] {
            let m_users = alphas.len();
            for m in 1..=m_users {
                let weak: Vec<(f64, Complex64)> = alphas[m..].iter().map(|&a| (a, -ONE)).collect();
                let prior: Vec<(f64, Complex64)> = alphas[..m - 1].iter().map(|&a| (a, 0.0 * ONE)).collect();
                let p = pep_noma_mth_user(d, &prior, &weak, alphas[m - 1], power, 1.0, m, m_users, n_active as f64)
                    .unwrap();
                let eta = (alphas[m - 1] * power).sqrt() * 4.0
                    - 2.0 * 2.0 * alphas[m..].iter().map(|a| (a * power).sqrt()).sum::<f64>();
                let oracle = averaged_conditional(eta, d, 1.0, m, m_users, n_active);
                assert!((p - oracle).abs() < 1e-8 * oracle.max(1e-3), "m={m}: {p} vs {oracle}");
            }
        }
    }

    #[test]
    fn bpsk_single_user_bound_is_the_pep() {
        let cfg = SystemConfig::new(2, 1, vec![1.0]);
        let psk = Psk::new(2).unwrap();
        let snr = cfg.snr(10.0);
        let b = ber_bound_noma_user(1, &cfg, &psk, snr, SicResidue::Uniform).unwrap();
        let p = pep_noma_first_user(2.0 * ONE, &[], 1.0, snr.rho_prime, cfg.noise_var, 1.0).unwrap();
        assert!((b - p).abs() < 1e-15);
    }

    #[test]
    fn bound_decreases_with_power() {
        let cfg = SystemConfig::new(5, 3, vec![0.7, 0.2, 0.1]);
        let psk = Psk::new(2).unwrap();
        for m in 1..=3 {
            let mut prev = f64::INFINITY;
            for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
                let b = ber_bound_noma_user(m, &cfg, &psk, cfg.snr(db), SicResidue::Perfect).unwrap();
                assert!(b <= prev, "m={m} at {db} dB");
                prev = b;
            }
        }
    }

    #[test]
    fn overall_composition() {
        let o = ber_overall(0.0, &[0.02, 0.03]);
        assert!((o.noma_raw - 0.05).abs() < 1e-15 && (o.system_raw - 0.05).abs() < 1e-15);
        let o = ber_overall(0.2, &[0.0, 0.0]);
        assert_eq!((o.noma_raw, o.system_raw), (0.2, 0.4));
        let o = ber_overall(0.01, &[0.06, 0.04]);
        assert!((o.noma_raw - 0.109).abs() < 1e-15);
        assert!((o.system_raw - 0.119).abs() < 1e-15);
        let o = ber_overall(0.7, &[0.9, 0.9]);
        assert_eq!(o.system, 1.0);
        assert!(o.system_raw > 1.0);
    }
}

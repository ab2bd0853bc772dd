//! Rayleigh fading draws, effective gains and order-statistic densities.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::codebook::AntennaCombination;
use crate::error::{Error, Result};

/// One block-fading draw for every link in the downlink.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub gssk_gains: Vec<Complex64>,
    /// `noma_gains[u][a]`: gain from antenna `a` to NOMA user `u` (unsorted).
    pub noma_gains: Vec<Vec<Complex64>>,
    /// `ordering[r]` is the user with the `r`-th weakest effective gain.
    pub ordering: Vec<usize>,
}

impl ChannelRealization {
    pub fn sample<R: Rng + ?Sized>(
        rng: &mut R,
        n_transmit: usize,
        n_users: usize,
        combo: &AntennaCombination,
    ) -> Self {
        let gssk_gains = sample_gssk_channel(rng, n_transmit);
        let noma_gains: Vec<Vec<Complex64>> =
            (0..n_users).map(|_| sample_gssk_channel(rng, n_transmit)).collect();
        let effective: Vec<Complex64> = noma_gains.iter().map(|g| effective_gain(g, combo)).collect();
        let ordering = magnitude_order(&effective);
        ChannelRealization {
            gssk_gains,
            noma_gains,
            ordering,
        }
    }

    /// Per-antenna gains of the user at rank `rank` (0-based, weakest first).
    pub fn ranked_user_gains(&self, rank: usize) -> &[Complex64] {
        &self.noma_gains[self.ordering[rank]]
    }
}

/// Standard circularly-symmetric complex Gaussian (unit variance).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn sample_gssk_channel<R: Rng + ?Sized>(rng: &mut R, n_transmit: usize) -> Vec<Complex64> {
    (0..n_transmit).map(|_| complex_gaussian(rng)).collect()
}

/// Sum of the gains of the active antennas.
pub fn effective_gain(gains: &[Complex64], combo: &AntennaCombination) -> Complex64 {
    combo.indices().iter().map(|&a| gains[a]).sum()
}

/// Permutation sorting `gains` ascending by magnitude, ties by original index.
pub fn magnitude_order(gains: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gains.len()).collect();
    order.sort_by(|&a, &b| gains[a].norm_sqr().total_cmp(&gains[b].norm_sqr()).then(a.cmp(&b)));
    order
}

/// Draws `m_users` i.i.d. effective gains for `combo`; returns them sorted
/// ascending by magnitude together with the sorting permutation.
pub fn sample_ordered_noma_channels<R: Rng + ?Sized>(
    rng: &mut R,
    m_users: usize,
    combo: &AntennaCombination,
) -> (Vec<Complex64>, Vec<usize>) {
    let n_active = combo.len();
    let raw: Vec<Complex64> = (0..m_users)
        .map(|_| (0..n_active).map(|_| complex_gaussian(rng)).sum())
        .collect();
    let order = magnitude_order(&raw);
    (order.iter().map(|&i| raw[i]).collect(), order)
}

fn ordered_pdf_prefactor(m: usize, m_users: usize) -> f64 {
    // M! / ((m-1)! (M-m)!)
    let ln = crate::specfun::ln_gamma(m_users as f64 + 1.0)
        - crate::specfun::ln_gamma(m as f64)
        - crate::specfun::ln_gamma((m_users - m) as f64 + 1.0);
    ln.exp().round()
}

fn check_rank(m: usize, m_users: usize) -> Result<()> {
    if m == 0 || m > m_users {
        return Err(Error::arg(format!("rank {m} outside 1..={m_users}")));
    }
    Ok(())
}

/// Density of the `m`-th smallest of `m_users` i.i.d. Rayleigh magnitudes,
/// each with second moment `n_active`.
pub fn ordered_rayleigh_pdf(g: f64, m: usize, m_users: usize, n_active: usize) -> Result<f64> {
    check_rank(m, m_users)?;
    if !(g >= 0.0) {
        return Err(Error::arg(format!("magnitude must be nonnegative, got {g}")));
    }
    let omega = n_active as f64;
    let survival = (-g * g / omega).exp();
    let cdf = -(-g * g / omega).exp_m1();
    let base = 2.0 * g / omega * survival;
    Ok(ordered_pdf_prefactor(m, m_users)
        * cdf.powi(m as i32 - 1)
        * survival.powi((m_users - m) as i32)
        * base)
}

/// `E[g_(m)^2]` for the ordered magnitudes above, in closed form: the `m`-th
/// smallest of `M` exponentials with mean `n_active` has mean
/// `n_active * sum_{i=M-m+1}^{M} 1/i`.
pub fn ordered_second_moment(m: usize, m_users: usize, n_active: usize) -> Result<f64> {
    check_rank(m, m_users)?;
    let harmonic: f64 = (m_users - m + 1..=m_users).map(|i| 1.0 / i as f64).sum();
    Ok(n_active as f64 * harmonic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_semi_infinite;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn combo(ix: &[usize]) -> AntennaCombination {
        AntennaCombination::new(ix.to_vec()).unwrap()
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let draws = sample_gssk_channel(&mut rng, n);
        let mean: Complex64 = draws.iter().sum::<Complex64>() / n as f64;
        let power: f64 = draws.iter().map(|h| h.norm_sqr()).sum::<f64>() / n as f64;
        assert!(mean.norm() < 0.01);
        assert!((power - 1.0).abs() < 0.01);
        let mut again = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_gssk_channel(&mut again, 16), draws[..16]);
    }

    #[test]
    fn effective_gain_sums() {
        let g = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
        assert_eq!(effective_gain(&g, &combo(&[0, 1])), Complex64::new(1.0, 1.0));
        assert_eq!(effective_gain(&g, &combo(&[2])), g[2]);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 1_000_000;
        let c = combo(&[0, 1]);
        let e: f64 = (0..n)
            .map(|_| effective_gain(&sample_gssk_channel(&mut rng, 2), &c).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((e - 2.0).abs() < 0.02, "{e}");
    }

    #[test]
    fn effective_energy_is_exponential() {
        // Kolmogorov-Smirnov against Exp(mean n_t) at the 1% level.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let c = combo(&[0, 2, 3]);
        let mut x: Vec<f64> = (0..n)
            .map(|_| effective_gain(&sample_gssk_channel(&mut rng, 4), &c).norm_sqr())
            .collect();
        x.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        for (i, v) in x.iter().enumerate() {
            let cdf = 1.0 - (-v / 3.0).exp();
            d = d.max((cdf - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - cdf).abs());
        }
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn ordering_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (g, p) = sample_ordered_noma_channels(&mut rng, 1, &combo(&[0]));
        assert_eq!((g.len(), p), (1, vec![0]));
        for _ in 0..100 {
            let (g, p) = sample_ordered_noma_channels(&mut rng, 3, &combo(&[0, 1]));
            assert!(g.windows(2).all(|w| w[0].norm() <= w[1].norm()));
            let mut sorted = p.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 1, 2]);
        }
        let n = 200_000;
        let c = combo(&[0]);
        let e: f64 = (0..n)
            .map(|_| sample_ordered_noma_channels(&mut rng, 2, &c).0[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((e - 0.5).abs() < 0.01, "{e}");
    }

    #[test]
    fn realization_ordering_reproduces_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = combo(&[1, 2]);
        for _ in 0..50 {
            let ch = ChannelRealization::sample(&mut rng, 4, 3, &c);
            let mags: Vec<f64> = (0..3).map(|r| effective_gain(ch.ranked_user_gains(r), &c).norm()).collect();
            assert!(mags.windows(2).all(|w| w[0] <= w[1]));
        }
        let ties = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0)];
        assert_eq!(magnitude_order(&ties), vec![2, 0, 1]);
    }

    #[test]
    fn ordered_pdf_normalisation_and_moments() {
        for m_users in 1..=4 {
            for m in 1..=m_users {
                for n_active in [1, 2, 3] {
                    let f = |g: f64| ordered_rayleigh_pdf(g, m, m_users, n_active).unwrap();
                    let mass = integrate_semi_infinite(f, 0.0, 1e-12).unwrap();
                    assert!((mass - 1.0).abs() < 1e-8, "M={m_users} m={m} n={n_active}: {mass}");
                    let second = integrate_semi_infinite(|g| g * g * f(g), 0.0, 1e-12).unwrap();
                    let closed = ordered_second_moment(m, m_users, n_active).unwrap();
                    assert!((second - closed).abs() < 1e-7, "{second} vs {closed}");
                }
            }
        }
        let f = |g: f64| ordered_rayleigh_pdf(g, 1, 2, 1).unwrap();
        let second = integrate_semi_infinite(|g| g * g * f(g), 0.0, 1e-12).unwrap();
        assert!((second - 0.5).abs() < 1e-6);
        // M = 1 is the plain Rayleigh density.
        let g = 0.7f64;
        let plain = 2.0 * g * (-g * g).exp();
        assert!((ordered_rayleigh_pdf(g, 1, 1, 1).unwrap() - plain).abs() < 1e-15);
        assert!(ordered_rayleigh_pdf(-0.1, 1, 1, 1).is_err());
        assert!(ordered_rayleigh_pdf(0.1, 3, 2, 1).is_err());
    }
}

//! Deterministic parallel Monte Carlo engine for BER/SER and throughput curves.
//!
//! Trials are split into fixed-size chunks. Chunk `c` draws from a ChaCha8
//! stream keyed by the run seed and stream index `c`, and chunk results are
//! integer counts reduced by summation, so the output does not depend on the
//! number of worker threads. All random draws of a trial happen before any
//! detection, and the draws do not depend on the SNR or the detector, so every
//! SNR point and detector sees the same channels, symbols and noise.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{rate_gssk, rate_noma_user, CurveTable};
use crate::channel::{complex_gaussian, effective_gain, magnitude_order};
use crate::codebook::{build_codebook, Codebook};
use crate::config::SystemConfig;
use crate::constellation::Psk;
use crate::error::{Error, Result};
use crate::phy::{energy_argmin, sic_walk};

const GSSK_STREAM: u64 = 0x6773_736b;
const NOMA_STREAM: u64 = 0x6e6f_6d61;
const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    /// Energy-based detection, blind to the NOMA payload.
    Energy,
    /// Coherent ML with the transmitted superposition known.
    Ideal,
}

impl FromStr for Detector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" => Ok(Detector::Energy),
            "ideal" => Ok(Detector::Ideal),
            other => Err(Error::arg(format!("unknown detector `{other}` (expected energy|ideal)"))),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::Energy => "energy",
            Detector::Ideal => "ideal",
        })
    }
}

/// Where a NOMA receiver gets the active antenna set from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AntennaKnowledge {
    /// Runs the energy detector on its own received signal.
    Estimated,
    /// Told the transmitted combination.
    Genie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BerEstimate {
    pub fn new(errors: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        let ber = if trials == 0 { 0.0 } else { errors as f64 / trials as f64 };
        BerEstimate {
            errors,
            trials,
            ber,
            ci_low: ci_low.min(ber),
            ci_high: ci_high.max(ber),
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub chunk_size: u64,
    /// Stop after the first wave of chunks in which every tracked counter
    /// reached this many errors.
    pub early_stop_errors: Option<u64>,
    /// Chunks per wave when early stopping is enabled.
    pub wave_chunks: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            chunk_size: 4096,
            early_stop_errors: None,
            wave_chunks: 32,
        }
    }
}

impl EngineOptions {
    pub fn with_early_stop(errors: u64) -> Self {
        EngineOptions {
            early_stop_errors: Some(errors),
            ..Self::default()
        }
    }
}

/// Spatial-bit BER and combination SER at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsskBer {
    pub snr_db: f64,
    pub bit: BerEstimate,
    pub symbol: BerEstimate,
}

fn stream_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn chunk_rng(base: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(chunk);
    rng
}

/// Runs `trials` trials; `trial` adds to the counter slice. Returns the
/// counters and the number of trials actually run.
fn run_chunks<S, I, T, D>(
    base: u64,
    trials: u64,
    opts: EngineOptions,
    n_counts: usize,
    init: I,
    trial: T,
    done: D,
) -> (Vec<u64>, u64)
where
    I: Fn() -> S + Sync,
    T: Fn(&mut ChaCha8Rng, &mut S, &mut [u64]) + Sync,
    D: Fn(&[u64]) -> bool,
{
    let chunk = opts.chunk_size.max(1);
    let n_chunks = trials.div_ceil(chunk);
    let wave = match opts.early_stop_errors {
        Some(_) => opts.wave_chunks.max(1),
        None => n_chunks.max(1),
    };
    let mut totals = vec![0u64; n_counts];
    let mut next = 0;
    while next < n_chunks {
        let end = (next + wave).min(n_chunks);
        let part = (next..end)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(base, c);
                let mut state = init();
                let mut counts = vec![0u64; n_counts];
                let len = chunk.min(trials - c * chunk);
                for _ in 0..len {
                    trial(&mut rng, &mut state, &mut counts);
                }
                counts
            })
            .reduce(
                || vec![0u64; n_counts],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        totals.iter_mut().zip(part).for_each(|(x, y)| *x += y);
        next = end;
        if opts.early_stop_errors.is_some() && done(&totals) {
            break;
        }
    }
    (totals, (next * chunk).min(trials))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("SNR grid must be non-empty and finite"));
    }
    Ok(())
}

struct GsskScratch {
    gains: Vec<Complex64>,
    eff: Vec<Complex64>,
    energies: Vec<f64>,
}

/// Spatial-bit BER and SER over an SNR grid, all points sharing the same draws.
pub fn run_gssk_ber_grid(
    cfg: &SystemConfig,
    detector: Detector,
    grid: &[f64],
    opts: EngineOptions,
) -> Result<Vec<GsskBer>> {
    check_grid(grid)?;
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let psk = Psk::new(cfg.psk_order)?;
    let amps: Vec<f64> = cfg.power_coeffs.iter().map(|a| (a * cfg.total_power).sqrt()).collect();
    let sqrt_rho: Vec<f64> = grid.iter().map(|&db| cfg.snr(db).rho_prime.sqrt()).collect();
    let scale: Vec<f64> = grid.iter().map(|&db| cfg.snr(db).rho_prime * cfg.total_power).collect();
    let sigma = cfg.noise_var.sqrt();
    let noise_var = cfg.noise_var;
    let n_points = grid.len();
    let target = opts.early_stop_errors.unwrap_or(u64::MAX);

    let (counts, trials) = run_chunks(
        stream_seed(cfg.seed, GSSK_STREAM),
        cfg.trials_per_point,
        opts,
        2 * n_points,
        || GsskScratch {
            gains: vec![Complex64::new(0.0, 0.0); cfg.n_transmit],
            eff: vec![Complex64::new(0.0, 0.0); cb.len()],
            energies: vec![0.0; cb.len()],
        },
        |rng, s, counts| {
            let j = rng.random_range(0..cb.len());
            for g in s.gains.iter_mut() {
                *g = complex_gaussian(rng);
            }
            let x: Complex64 = amps
                .iter()
                .map(|a| a * psk.point(rng.random_range(0..psk.order())))
                .sum();
            let w = complex_gaussian(rng) * sigma;
            fill_effective(&cb, &s.gains, &mut s.eff, &mut s.energies);
            let hx = s.eff[j] * x;
            for p in 0..n_points {
                let y = sqrt_rho[p] * hx + w;
                let k = match detector {
                    Detector::Energy => energy_argmin(y.norm_sqr(), &s.energies, scale[p], noise_var),
                    Detector::Ideal => ideal_argmin(y, sqrt_rho[p] * x, &s.eff),
                };
                if k != j {
                    counts[2 * p] += (cb.label(j) ^ cb.label(k)).count_ones() as u64;
                    counts[2 * p + 1] += 1;
                }
            }
        },
        |c| (0..n_points).all(|p| c[2 * p] >= target),
    );
    let bits = cb.bits_per_symbol() as u64;
    Ok(grid
        .iter()
        .enumerate()
        .map(|(p, &snr_db)| GsskBer {
            snr_db,
            bit: BerEstimate::new(counts[2 * p], trials * bits),
            symbol: BerEstimate::new(counts[2 * p + 1], trials),
        })
        .collect())
}

/// [`run_gssk_ber_grid`] at a single point with default engine options.
pub fn run_gssk_ber(cfg: &SystemConfig, detector: Detector, snr_db: f64) -> Result<GsskBer> {
    Ok(run_gssk_ber_grid(cfg, detector, &[snr_db], EngineOptions::default())?[0])
}

fn fill_effective(cb: &Codebook, gains: &[Complex64], eff: &mut [Complex64], energies: &mut [f64]) {
    for (k, combo) in cb.combos().iter().enumerate() {
        let h = effective_gain(gains, combo);
        eff[k] = h;
        energies[k] = h.norm_sqr();
    }
}

#[inline]
fn ideal_argmin(y: Complex64, s: Complex64, eff: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, &h) in eff.iter().enumerate() {
        let d = (y - s * h).norm_sqr();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

struct NomaScratch {
    gains: Vec<Complex64>,
    eff: Vec<Vec<Complex64>>,
    energies: Vec<Vec<f64>>,
    symbols: Vec<usize>,
    noise: Vec<Complex64>,
    at_combo: Vec<Complex64>,
}

/// Per-user BER (index 0 = weakest channel, largest power share) over an SNR
/// grid for the full receive chain: antenna-set acquisition, then SIC.
pub fn run_noma_ber_grid(
    cfg: &SystemConfig,
    knowledge: AntennaKnowledge,
    grid: &[f64],
    opts: EngineOptions,
) -> Result<Vec<Vec<BerEstimate>>> {
    check_grid(grid)?;
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let psk = Psk::new(cfg.psk_order)?;
    let m_users = cfg.n_noma_users;
    let coeffs = cfg.power_coeffs.clone();
    let power = cfg.total_power;
    let amps: Vec<f64> = coeffs.iter().map(|a| (a * power).sqrt()).collect();
    let sqrt_rho: Vec<f64> = grid.iter().map(|&db| cfg.snr(db).rho_prime.sqrt()).collect();
    let scale: Vec<f64> = grid.iter().map(|&db| cfg.snr(db).rho_prime * power).collect();
    let sigma = cfg.noise_var.sqrt();
    let noise_var = cfg.noise_var;
    let n_points = grid.len();
    let target = opts.early_stop_errors.unwrap_or(u64::MAX);

    let (counts, trials) = run_chunks(
        stream_seed(cfg.seed, NOMA_STREAM),
        cfg.trials_per_point,
        opts,
        n_points * m_users,
        || NomaScratch {
            gains: vec![Complex64::new(0.0, 0.0); cfg.n_transmit],
            eff: vec![vec![Complex64::new(0.0, 0.0); cb.len()]; m_users],
            energies: vec![vec![0.0; cb.len()]; m_users],
            symbols: vec![0; m_users],
            noise: vec![Complex64::new(0.0, 0.0); m_users],
            at_combo: vec![Complex64::new(0.0, 0.0); m_users],
        },
        |rng, s, counts| {
            let j = rng.random_range(0..cb.len());
            for u in 0..m_users {
                for g in s.gains.iter_mut() {
                    *g = complex_gaussian(rng);
                }
                fill_effective(&cb, &s.gains, &mut s.eff[u], &mut s.energies[u]);
            }
            for sym in s.symbols.iter_mut() {
                *sym = rng.random_range(0..psk.order());
            }
            for n in s.noise.iter_mut() {
                *n = complex_gaussian(rng) * sigma;
            }
            for u in 0..m_users {
                s.at_combo[u] = s.eff[u][j];
            }
            let order = magnitude_order(&s.at_combo);
            let x: Complex64 = amps.iter().zip(&s.symbols).map(|(a, &z)| a * psk.point(z)).sum();
            for p in 0..n_points {
                for (rank, &u) in order.iter().enumerate() {
                    let r = sqrt_rho[p] * s.eff[u][j] * x + s.noise[rank];
                    let k = match knowledge {
                        AntennaKnowledge::Genie => j,
                        AntennaKnowledge::Estimated => {
                            energy_argmin(r.norm_sqr(), &s.energies[u], scale[p], noise_var)
                        }
                    };
                    let gain = sqrt_rho[p] * s.eff[u][k];
                    let decided = sic_walk(r, gain, &coeffs[..=rank], power, &psk, |_| {});
                    counts[p * m_users + rank] += psk.bit_errors(s.symbols[rank], decided) as u64;
                }
            }
        },
        |c| c.iter().all(|&e| e >= target),
    );
    let bits = psk.bits_per_symbol() as u64;
    Ok((0..n_points)
        .map(|p| {
            (0..m_users)
                .map(|m| BerEstimate::new(counts[p * m_users + m], trials * bits))
                .collect()
        })
        .collect())
}

/// [`run_noma_ber_grid`] at a single point with default engine options.
pub fn run_noma_ber(cfg: &SystemConfig, snr_db: f64, knowledge: AntennaKnowledge) -> Result<Vec<BerEstimate>> {
    Ok(run_noma_ber_grid(cfg, knowledge, &[snr_db], EngineOptions::default())?.remove(0))
}

/// Scenario tag used in curve tables, e.g. `Nt5_nt3_M2`.
pub fn scenario_tag(cfg: &SystemConfig) -> String {
    format!("Nt{}_nt{}_M{}", cfg.n_transmit, cfg.n_active, cfg.n_noma_users)
}

/// Conventional GSSK reference: one unmodulated stream, coherent detection.
pub fn conventional_gssk_config(cfg: &SystemConfig) -> SystemConfig {
    let mut c = cfg.clone();
    c.n_noma_users = 1;
    c.power_coeffs = vec![1.0];
    c
}

/// Conventional NOMA reference: a single transmit antenna.
pub fn conventional_noma_config(cfg: &SystemConfig) -> SystemConfig {
    let mut c = cfg.clone();
    c.n_transmit = 1;
    c.n_active = 1;
    c
}

/// Throughput curves over `grid`: analytical rates scaled by simulated error
/// rates for N-GSSK (energy detection), iN-GSSK (known payload, genie antenna
/// set at the NOMA users), c-GSSK and c-NOMA.
pub fn run_rate_curves(cfg: &SystemConfig, grid: &[f64]) -> Result<CurveTable> {
    run_rate_curves_with(cfg, grid, EngineOptions::default())
}

pub fn run_rate_curves_with(cfg: &SystemConfig, grid: &[f64], opts: EngineOptions) -> Result<CurveTable> {
    check_grid(grid)?;
    let tag = scenario_tag(cfg);
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let energy = run_gssk_ber_grid(cfg, Detector::Energy, grid, opts)?;
    let ideal = run_gssk_ber_grid(cfg, Detector::Ideal, grid, opts)?;
    let estimated = run_noma_ber_grid(cfg, AntennaKnowledge::Estimated, grid, opts)?;
    let genie = run_noma_ber_grid(cfg, AntennaKnowledge::Genie, grid, opts)?;

    let c_gssk_cfg = conventional_gssk_config(cfg);
    let c_gssk = run_gssk_ber_grid(&c_gssk_cfg, Detector::Ideal, grid, opts)?;
    let c_noma_cfg = conventional_noma_config(cfg);
    let c_noma = run_noma_ber_grid(&c_noma_cfg, AntennaKnowledge::Genie, grid, opts)?;

    let mut table = CurveTable::new();
    for (p, &db) in grid.iter().enumerate() {
        let snr = cfg.snr(db);
        let c_snr = c_noma_cfg.snr(db);
        let mut r_users = Vec::with_capacity(cfg.n_noma_users);
        let mut r_users_c = Vec::with_capacity(cfg.n_noma_users);
        for m in 1..=cfg.n_noma_users {
            r_users.push(rate_noma_user(m, cfg, snr)?);
            r_users_c.push(rate_noma_user(m, &c_noma_cfg, c_snr)?);
        }
        let noma = |pe: &[BerEstimate], rates: &[f64]| -> f64 {
            pe.iter().zip(rates).map(|(e, r)| (1.0 - e.ber) * r).sum()
        };
        let r_gssk = rate_gssk(energy[p].bit.ber, &cb);
        let r_noma = noma(&estimated[p], &r_users);
        let r_gssk_ideal = rate_gssk(ideal[p].bit.ber, &cb);
        let r_noma_ideal = noma(&genie[p], &r_users);
        let r_cgssk = rate_gssk(c_gssk[p].bit.ber, &cb);
        let r_cnoma = noma(&c_noma[p], &r_users_c);

        let b = &energy[p].bit;
        table.push_with_ci(db, "pe_gssk", b.ber, (b.ci_low, b.ci_high), &tag);
        for (m, e) in estimated[p].iter().enumerate() {
            table.push_with_ci(db, &format!("pe_user{}", m + 1), e.ber, (e.ci_low, e.ci_high), &tag);
        }
        table.push(db, "r_gssk", r_gssk, &tag);
        table.push(db, "r_noma", r_noma, &tag);
        table.push(db, "r_total", r_gssk + r_noma, &tag);
        table.push(db, "r_gssk_ideal", r_gssk_ideal, &tag);
        table.push(db, "r_total_ideal", r_gssk_ideal + r_noma_ideal, &tag);
        table.push(db, "r_cgssk", r_cgssk, &tag);
        table.push(db, "r_cnoma", r_cnoma, &tag);
    }
    Ok(table)
}

//! Scenario definition shared by every other module.
//!
//! A [`SystemConfig`] is plain data. [`validate_config`] checks it once; after
//! that it is treated as immutable and shared freely between worker threads.
//!
//! Files use a flat `key = value` layout:
//!
//! ```toml
//! n_transmit = 5
//! n_active = 3
//! n_noma_users = 2
//! power_coeffs = [0.8, 0.2]
//! snr_grid_db = [0, 10, 20, 30]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codebook::binomial;
use crate::error::{Error, Result};

/// Largest antenna-combination count accepted before enumeration is refused.
pub const MAX_COMBINATIONS: u64 = 1 << 20;

const COEFF_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    /// Total transmit antennas.
    pub n_transmit: usize,
    /// Antennas switched on per GSSK symbol.
    pub n_active: usize,
    pub n_noma_users: usize,
    /// Power split across NOMA users, strongest allocation first.
    pub power_coeffs: Vec<f64>,
    /// Total transmit power, linear.
    pub total_power: f64,
    /// Receiver noise variance, linear. Shared by the GSSK user and all NOMA users.
    pub noise_var: f64,
    pub snr_grid_db: Vec<f64>,
    /// PSK constellation size used for every NOMA user.
    pub psk_order: usize,
    pub trials_per_point: u64,
    pub seed: u64,
}

/// Linear SNR and its per-active-antenna share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedSnr {
    pub rho: f64,
    /// `rho / n_active`.
    pub rho_prime: f64,
}

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x6e67_7373_6b00;

/// The 0:2:40 dB grid used when a file does not specify one.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=20).map(|i| 2.0 * i as f64).collect()
}

impl SystemConfig {
    /// Scenario with the defaults for everything except the antenna counts and
    /// power split: unit power and noise, BPSK, 0:2:40 dB.
    pub fn new(n_transmit: usize, n_active: usize, power_coeffs: Vec<f64>) -> Self {
        SystemConfig {
            n_transmit,
            n_active,
            n_noma_users: power_coeffs.len(),
            power_coeffs,
            total_power: 1.0,
            noise_var: 1.0,
            snr_grid_db: default_snr_grid(),
            psk_order: 2,
            trials_per_point: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_snr_grid(mut self, grid: Vec<f64>) -> Self {
        self.snr_grid_db = grid;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials_per_point = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_psk_order(mut self, order: usize) -> Self {
        self.psk_order = order;
        self
    }

    pub fn with_noise_var(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }

    pub fn with_total_power(mut self, power: f64) -> Self {
        self.total_power = power;
        self
    }

    /// Parses and validates a config file body.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::config(e.message().to_string()))?;
        validate_config(raw.into_config()?)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to toml")
    }

    pub fn snr(&self, snr_db: f64) -> DerivedSnr {
        snr_to_linear(snr_db, self.n_active)
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_var.sqrt()
    }

    /// Bits carried per PSK symbol.
    pub fn bits_per_psk_symbol(&self) -> u32 {
        self.psk_order.trailing_zeros()
    }
}

/// Checks every scenario invariant and returns the config unchanged, or the
/// first violation found.
pub fn validate_config(cfg: SystemConfig) -> Result<SystemConfig> {
    if cfg.n_transmit == 0 {
        return Err(Error::config("n_transmit must be at least 1"));
    }
    if cfg.n_active == 0 {
        return Err(Error::config("n_active must be at least 1"));
    }
    if cfg.n_active > cfg.n_transmit {
        return Err(Error::config(format!(
            "n_active exceeds n_transmit ({} > {})",
            cfg.n_active, cfg.n_transmit
        )));
    }
    let combos = binomial(cfg.n_transmit as u64, cfg.n_active as u64);
    if combos > MAX_COMBINATIONS {
        return Err(Error::config(format!(
            "C({}, {}) = {combos} antenna combinations is more than the supported {MAX_COMBINATIONS}",
            cfg.n_transmit, cfg.n_active
        )));
    }
    if cfg.n_noma_users == 0 {
        return Err(Error::config("n_noma_users must be at least 1"));
    }
    if cfg.power_coeffs.len() != cfg.n_noma_users {
        return Err(Error::config(format!(
            "power_coeffs has {} entries but n_noma_users = {}",
            cfg.power_coeffs.len(),
            cfg.n_noma_users
        )));
    }
    if let Some(bad) = cfg.power_coeffs.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::config(format!("power coefficient {bad} is not positive")));
    }
    if cfg.power_coeffs.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::config(format!(
            "coefficients not strictly descending: {:?}",
            cfg.power_coeffs
        )));
    }
    let sum: f64 = cfg.power_coeffs.iter().sum();
    if (sum - 1.0).abs() > COEFF_SUM_TOL {
        return Err(Error::config(format!("power coefficients sum to {sum}, expected 1")));
    }
    if !(cfg.total_power.is_finite() && cfg.total_power > 0.0) {
        return Err(Error::config("total_power must be positive"));
    }
    if !(cfg.noise_var.is_finite() && cfg.noise_var > 0.0) {
        return Err(Error::config("noise_var must be positive"));
    }
    if cfg.psk_order < 2 || !cfg.psk_order.is_power_of_two() {
        return Err(Error::config(format!(
            "psk_order {} is not a power of two >= 2",
            cfg.psk_order
        )));
    }
    if cfg.snr_grid_db.is_empty() {
        return Err(Error::config("snr_grid_db is empty"));
    }
    if cfg.snr_grid_db.iter().any(|s| !s.is_finite()) {
        return Err(Error::config("snr_grid_db contains a non-finite value"));
    }
    if cfg.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("snr_grid_db must be strictly increasing"));
    }
    if cfg.trials_per_point == 0 {
        return Err(Error::config("trials_per_point must be at least 1"));
    }
    Ok(cfg)
}

/// Converts an SNR in dB to linear form and splits it over the active antennas.
///
/// Panics if `n_active` is zero.
pub fn snr_to_linear(snr_db: f64, n_active: usize) -> DerivedSnr {
    assert!(n_active >= 1, "n_active must be at least 1");
    let rho = 10f64.powf(snr_db / 10.0);
    DerivedSnr {
        rho,
        rho_prime: rho / n_active as f64,
    }
}

/// Parses `"a:step:b"` (inclusive of `b`) or a single value `"a"`.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::arg(format!("bad number {s:?} in snr grid {spec:?}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || stop < start {
                return Err(Error::arg(format!("snr grid {spec:?} is empty or has a non-positive step")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        _ => Err(Error::arg(format!("snr grid {spec:?} is not of the form a:step:b"))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_transmit: Option<usize>,
    n_active: Option<usize>,
    n_noma_users: Option<usize>,
    power_coeffs: Option<Vec<f64>>,
    total_power: Option<f64>,
    noise_var: Option<f64>,
    snr_grid_db: Option<Vec<f64>>,
    psk_order: Option<usize>,
    trials_per_point: Option<u64>,
    seed: Option<u64>,
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(format!("missing key `{key}`")))
}

impl RawConfig {
    fn into_config(self) -> Result<SystemConfig> {
        Ok(SystemConfig {
            n_transmit: required(self.n_transmit, "n_transmit")?,
            n_active: required(self.n_active, "n_active")?,
            n_noma_users: required(self.n_noma_users, "n_noma_users")?,
            power_coeffs: required(self.power_coeffs, "power_coeffs")?,
            total_power: self.total_power.unwrap_or(1.0),
            noise_var: self.noise_var.unwrap_or(1.0),
            snr_grid_db: self.snr_grid_db.unwrap_or_else(default_snr_grid),
            psk_order: self.psk_order.unwrap_or(2),
            trials_per_point: self.trials_per_point.unwrap_or(DEFAULT_TRIALS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

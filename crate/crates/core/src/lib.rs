//! Hybrid NOMA + generalized space shift keying (GSSK) downlink toolkit.
//!
//! The crate models a base station that conveys bits both through which subset
//! of its antennas is switched on and through a power-domain superposition of
//! PSK symbols for several NOMA users. It provides closed-form and quadrature
//! error-probability bounds, achievable-rate integrals, and a deterministic
//! parallel Monte Carlo engine to check them against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod codebook;
pub mod config;
pub mod constellation;
pub mod error;
pub mod figures;
pub mod montecarlo;
pub mod phy;
pub mod quadrature;
pub mod specfun;

pub use codebook::{bit_distance, build_codebook, AntennaCombination, Codebook};
pub use config::{parse_snr_grid, snr_to_linear, validate_config, DerivedSnr, SystemConfig};
pub use error::{Error, Result};

//! Spatial BER of the energy detector against the union bound.

use ngssk::analysis::{gssk_a_parameter, pep_gssk_quadrature, union_bound_gssk};
use ngssk::montecarlo::{run_gssk_ber_grid, Detector, EngineOptions};
use ngssk::{build_codebook, SystemConfig};

pub fn run_example() -> ngssk::Result<()> {
    let cfg = SystemConfig::new(5, 2, vec![1.0]).with_trials(20_000).with_seed(7);
    let grid = [0.0, 10.0, 20.0, 30.0];
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let sim = run_gssk_ber_grid(&cfg, Detector::Energy, &grid, EngineOptions::default())?;
    for r in sim {
        let snr = cfg.snr(r.snr_db);
        let a = gssk_a_parameter(snr.rho_prime, cfg.total_power, cfg.noise_var, cfg.n_active)?;
        let bound = union_bound_gssk(&cb, pep_gssk_quadrature(a)?.value);
        println!(
            "{:>4} dB  simulated {:.4} [{:.4}, {:.4}]  bound {:.4}",
            r.snr_db, r.bit.ber, r.bit.ci_low, r.bit.ci_high, bound.clamped
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

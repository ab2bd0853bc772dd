//! Per-user SIC bit error rate against the analytical NOMA bound.

use ngssk::analysis::{ber_bound_noma_user, SicResidue};
use ngssk::constellation::Psk;
use ngssk::montecarlo::{run_noma_ber_grid, AntennaKnowledge, EngineOptions};
use ngssk::SystemConfig;

pub fn run_example() -> ngssk::Result<()> {
    let cfg = SystemConfig::new(5, 3, vec![0.8, 0.2]).with_trials(20_000).with_seed(11);
    let psk = Psk::new(cfg.psk_order)?;
    let grid = [10.0, 20.0, 30.0];
    let sim = run_noma_ber_grid(&cfg, AntennaKnowledge::Genie, &grid, EngineOptions::default())?;
    for (db, users) in grid.iter().zip(sim) {
        for (m, est) in users.iter().enumerate() {
            let bound = ber_bound_noma_user(m + 1, &cfg, &psk, cfg.snr(*db), SicResidue::default())?;
            println!("{db:>4} dB user {}: simulated {:.5}  bound {:.5}", m + 1, est.ber, bound);
        }
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

//! Ergodic NOMA rates over ordered Rayleigh channels.

use ngssk::analysis::rate_noma_user;
use ngssk::channel::ordered_second_moment;
use ngssk::SystemConfig;

pub fn run_example() -> ngssk::Result<()> {
    let cfg = SystemConfig::new(5, 3, vec![0.7, 0.2, 0.1]);
    for m in 1..=cfg.n_noma_users {
        println!(
            "user {m}: E|g|^2 = {:.4}",
            ordered_second_moment(m, cfg.n_noma_users, cfg.n_active)?
        );
    }
    for db in [0.0, 20.0, 40.0] {
        let rates: Vec<String> = (1..=cfg.n_noma_users)
            .map(|m| rate_noma_user(m, &cfg, cfg.snr(db)).map(|r| format!("{r:.4}")))
            .collect::<ngssk::Result<_>>()?;
        println!("{db:>4} dB: {}", rates.join("  "));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

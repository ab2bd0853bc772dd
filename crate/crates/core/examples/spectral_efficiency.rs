//! Simulated throughput of N-GSSK and the conventional baselines.

use ngssk::montecarlo::{run_rate_curves, scenario_tag};
use ngssk::SystemConfig;

pub fn run_example() -> ngssk::Result<()> {
    let cfg = SystemConfig::new(5, 3, vec![0.8, 0.2]).with_trials(5_000).with_seed(3);
    let grid = [0.0, 20.0, 40.0];
    let table = run_rate_curves(&cfg, &grid)?;
    let tag = scenario_tag(&cfg);
    for metric in ["r_total", "r_cgssk", "r_cnoma"] {
        let points: Vec<String> = table
            .series(metric, &tag)
            .iter()
            .map(|(db, v)| format!("{db} dB: {v:.3}"))
            .collect();
        println!("{metric:>8}  {}", points.join(", "));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

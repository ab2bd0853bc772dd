//! The same seed gives the same estimates whatever the thread count.

use ngssk::montecarlo::{run_gssk_ber_grid, Detector, EngineOptions};
use ngssk::SystemConfig;

pub fn run_example() -> ngssk::Result<()> {
    let cfg = SystemConfig::new(4, 2, vec![1.0]).with_trials(30_000).with_seed(99);
    let grid = [5.0, 15.0];
    let mut runs = Vec::new();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let r = pool.install(|| run_gssk_ber_grid(&cfg, Detector::Energy, &grid, EngineOptions::default()))?;
        let errors: Vec<u64> = r.iter().map(|p| p.bit.errors).collect();
        println!("{threads} thread(s): bit errors {errors:?}");
        runs.push(errors);
    }
    assert_eq!(runs[0], runs[1]);
    Ok(())
}

fn main() {
    run_example().unwrap();
}

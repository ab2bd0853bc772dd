//! Prints the spatial codebook for a few antenna configurations.

use ngssk::{bit_distance, build_codebook};

pub fn run_example() -> ngssk::Result<()> {
    for (nt, na) in [(4, 2), (5, 3), (8, 2)] {
        let cb = build_codebook(nt, na)?;
        println!(
            "N_t = {nt}, n_t = {na}: {} of {} combinations kept, {} bits",
            cb.len(),
            cb.m_h_full(),
            cb.bits_per_symbol()
        );
        print!("{}", cb.to_csv());
        println!("distance(0, last) = {}\n", bit_distance(&cb, 0, cb.len() - 1)?);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

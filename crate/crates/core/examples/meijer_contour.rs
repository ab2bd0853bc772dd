//! Evaluates the Meijer G instances by contour integration and checks one of
//! them against its error-function reduction.

use std::f64::consts::PI;

use ngssk::specfun::{erfcx, meijer_g_2212, meijer_g_3213};

pub fn run_example() -> ngssk::Result<()> {
    for z in [0.01, 0.5, 2.0, 50.0] {
        let g = meijer_g_2212(z)?;
        let reduced = PI / z.sqrt() * erfcx(1.0 / z.sqrt());
        println!("G21({z}) = {g:.12}  reduction {reduced:.12}");
    }
    for k in 0..4 {
        println!("G32_{k}(0.5) = {:.12}", meijer_g_3213(0.5, k)?);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

//! Compares the three evaluations of the spatial pairwise error probability.

use ngssk::analysis::{pep_gssk_closed_form, pep_gssk_laplace, pep_gssk_quadrature};
use ngssk::specfun::SeriesControl;

pub fn run_example() -> ngssk::Result<()> {
    println!("{:>8} {:>14} {:>14} {:>14} {:>6}", "a", "quadrature", "closed form", "1-D oracle", "terms");
    for a in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
        let q = pep_gssk_quadrature(a)?;
        let c = pep_gssk_closed_form(a, SeriesControl::default())?;
        let l = pep_gssk_laplace(a)?;
        println!(
            "{a:>8} {:>14.10} {:>14.10} {:>14.10} {:>6}",
            q.value, c.value, l.value, c.terms_used
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}

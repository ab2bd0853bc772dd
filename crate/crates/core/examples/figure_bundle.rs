//! Writes a reduced-size figure bundle and its manifest to a temporary directory.

use ngssk::figures::{build_figure, FigureOptions};

pub fn run_example() -> ngssk::Result<()> {
    let opts = FigureOptions {
        trials: Some(2_000),
        snr_grid: Some(vec![0.0, 10.0, 20.0, 30.0]),
        ..Default::default()
    };
    let bundle = build_figure(3, &opts)?;
    let dir = std::env::temp_dir().join(format!("ngssk_fig3_{}", std::process::id()));
    let manifest = bundle.write(&dir)?;
    println!("{}", std::fs::read_to_string(&manifest)?);
    for s in &bundle.series {
        println!("{} -> {} ({} rows)", s.name, s.file, s.table.len());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() {
    run_example().unwrap();
}

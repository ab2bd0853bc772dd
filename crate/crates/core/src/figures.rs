//! Built-in figure recipes and CSV bundles (one CSV per curve plus a JSON
//! manifest naming each series).

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{gssk_a_parameter, pep_gssk_closed_form, pep_gssk_quadrature, union_bound_gssk, CurveTable};
use crate::codebook::build_codebook;
use crate::config::{validate_config, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{run_gssk_ber_grid, run_rate_curves_with, scenario_tag, Detector, EngineOptions};
use crate::specfun::SeriesControl;

pub const FIGURE_IDS: [u32; 4] = [3, 4, 5, 6];

/// Overrides applied on top of a recipe's baked-in parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub snr_grid: Option<Vec<f64>>,
    pub engine: EngineOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRecipe {
    pub id: u32,
    pub title: &'static str,
    pub scenarios: Vec<SystemConfig>,
    pub snr_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    /// Legend label.
    pub name: String,
    pub file: String,
    pub metric: String,
    pub table: CurveTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureBundle {
    pub id: u32,
    pub title: String,
    pub x_axis: &'static str,
    pub y_axis: &'static str,
    pub y_scale: &'static str,
    pub series: Vec<Series>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    name: &'a str,
    file: &'a str,
    metric: &'a str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    figure: u32,
    title: &'a str,
    x_axis: &'a str,
    y_axis: &'a str,
    y_scale: &'a str,
    series: Vec<ManifestEntry<'a>>,
}

fn grid(a: f64, step: f64, b: f64) -> Vec<f64> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|i| a + step * i as f64).collect()
}

pub fn recipe(id: u32) -> Result<FigureRecipe> {
    let r = match id {
        3 => FigureRecipe {
            id,
            title: "Union bound and simulated spatial-bit BER, n_t = 2",
            scenarios: [8, 5, 4, 3].iter().map(|&nt| SystemConfig::new(nt, 2, vec![1.0])).collect(),
            snr_grid: grid(0.0, 2.0, 30.0),
        },
        4 => FigureRecipe {
            id,
            title: "Spectral efficiency of N-GSSK and iN-GSSK, n_t = 3",
            scenarios: [4, 5, 6].iter().map(|&nt| SystemConfig::new(nt, 3, vec![0.8, 0.2])).collect(),
            snr_grid: grid(0.0, 2.0, 40.0),
        },
        5 => FigureRecipe {
            id,
            title: "Spectral efficiency of N-GSSK, c-GSSK and c-NOMA, N_t = 5, n_t = 3",
            scenarios: vec![
                SystemConfig::new(5, 3, vec![0.8, 0.2]),
                SystemConfig::new(5, 3, vec![0.7, 0.2, 0.1]),
            ],
            snr_grid: grid(0.0, 2.0, 40.0),
        },
        6 => FigureRecipe {
            id,
            title: "Spectral efficiency of N-GSSK (n_t = 2) and N-SSK (n_t = 1) versus N_t",
            scenarios: [1usize, 2]
                .iter()
                .flat_map(|&na| (2..=8).map(move |nt| SystemConfig::new(nt, na, vec![0.8, 0.2])))
                .collect(),
            snr_grid: vec![30.0],
        },
        other => return Err(Error::arg(format!("unknown figure {other} (expected one of 3, 4, 5, 6)"))),
    };
    Ok(r)
}

fn apply(cfg: &SystemConfig, grid: &[f64], opts: &FigureOptions) -> Result<SystemConfig> {
    let mut c = cfg.clone().with_snr_grid(grid.to_vec());
    if let Some(t) = opts.trials {
        c = c.with_trials(t);
    }
    if let Some(s) = opts.seed {
        c = c.with_seed(s);
    }
    validate_config(c)
}

/// Analytical union bound over the config's SNR grid, for both PEP methods.
pub fn union_bound_curves(cfg: &SystemConfig) -> Result<CurveTable> {
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let tag = scenario_tag(cfg);
    let mut t = CurveTable::new();
    for &db in &cfg.snr_grid_db {
        let snr = cfg.snr(db);
        let a = gssk_a_parameter(snr.rho_prime, cfg.total_power, cfg.noise_var, cfg.n_active)?;
        let quad = pep_gssk_quadrature(a)?.value;
        let closed = pep_gssk_closed_form(a, SeriesControl::default())?.value;
        t.push(db, "union_bound", union_bound_gssk(&cb, quad).raw, &tag);
        t.push(db, "union_bound_closed_form", union_bound_gssk(&cb, closed).raw, &tag);
    }
    Ok(t)
}

/// Simulated spatial-bit BER with Wilson intervals.
pub fn simulated_ber_curve(cfg: &SystemConfig, detector: Detector, engine: EngineOptions) -> Result<CurveTable> {
    let tag = scenario_tag(cfg);
    let mut t = CurveTable::new();
    for r in run_gssk_ber_grid(cfg, detector, &cfg.snr_grid_db, engine)? {
        t.push_with_ci(r.snr_db, "spatial_ber", r.bit.ber, (r.bit.ci_low, r.bit.ci_high), &tag);
    }
    Ok(t)
}

fn series(name: String, file: String, table: &CurveTable, metric: &str, scenario: &str) -> Series {
    Series {
        name,
        file,
        metric: metric.to_string(),
        table: table.select(metric, scenario),
    }
}

pub fn build_figure(id: u32, opts: &FigureOptions) -> Result<FigureBundle> {
    let r = recipe(id)?;
    let grid = opts.snr_grid.clone().unwrap_or_else(|| r.snr_grid.clone());
    let scenarios: Vec<SystemConfig> = r
        .scenarios
        .iter()
        .map(|c| apply(c, if id == 6 { &r.snr_grid } else { &grid }, opts))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let (y_axis, y_scale) = if id == 3 { ("ber", "log") } else { ("bit/s/Hz", "linear") };
    match id {
        3 => {
            for cfg in &scenarios {
                let nt = cfg.n_transmit;
                let bound = union_bound_curves(cfg)?;
                out.push(Series {
                    name: format!("Union bound, N_t = {nt}"),
                    file: format!("fig3_bound_nt{nt}.csv"),
                    metric: "union_bound".into(),
                    table: bound,
                });
            }
            for cfg in &scenarios {
                let nt = cfg.n_transmit;
                out.push(Series {
                    name: format!("Simulation, N_t = {nt}"),
                    file: format!("fig3_sim_nt{nt}.csv"),
                    metric: "spatial_ber".into(),
                    table: simulated_ber_curve(cfg, Detector::Energy, opts.engine)?,
                });
            }
        }
        4 => {
            for cfg in &scenarios {
                let nt = cfg.n_transmit;
                let tag = scenario_tag(cfg);
                let t = run_rate_curves_with(cfg, &cfg.snr_grid_db, opts.engine)?;
                out.push(series(format!("N-GSSK, N_t = {nt}"), format!("fig4_ngssk_nt{nt}.csv"), &t, "r_total", &tag));
                out.push(series(
                    format!("iN-GSSK, N_t = {nt}"),
                    format!("fig4_ingssk_nt{nt}.csv"),
                    &t,
                    "r_total_ideal",
                    &tag,
                ));
            }
        }
        5 => {
            let mut tables = Vec::new();
            for cfg in &scenarios {
                tables.push((cfg.n_noma_users, scenario_tag(cfg), run_rate_curves_with(cfg, &cfg.snr_grid_db, opts.engine)?));
            }
            for (m, tag, t) in &tables {
                out.push(series(format!("N-GSSK, M = {m}"), format!("fig5_ngssk_m{m}.csv"), t, "r_total", tag));
            }
            let (_, tag, t) = &tables[0];
            out.push(series("c-GSSK".into(), "fig5_cgssk.csv".into(), t, "r_cgssk", tag));
            for (m, tag, t) in &tables {
                out.push(series(format!("c-NOMA, M = {m}"), format!("fig5_cnoma_m{m}.csv"), t, "r_cnoma", tag));
            }
        }
        6 => {
            for na in [2usize, 1] {
                let mut t = CurveTable::new();
                for cfg in scenarios.iter().filter(|c| c.n_active == na) {
                    let full = run_rate_curves_with(cfg, &cfg.snr_grid_db, opts.engine)?;
                    t.extend(full.select("r_total", &scenario_tag(cfg)));
                }
                let name = if na == 1 { "N-SSK (n_t = 1)".to_string() } else { format!("N-GSSK (n_t = {na})") };
                out.push(Series {
                    name,
                    file: format!("fig6_nt{na}.csv"),
                    metric: "r_total".into(),
                    table: t,
                });
            }
        }
        _ => unreachable!("recipe() rejects other ids"),
    }
    Ok(FigureBundle {
        id,
        title: r.title.to_string(),
        x_axis: if id == 6 { "n_transmit" } else { "snr_db" },
        y_axis,
        y_scale,
        series: out,
    })
}

impl FigureBundle {
    pub fn manifest_json(&self) -> String {
        let m = Manifest {
            figure: self.id,
            title: &self.title,
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            y_scale: self.y_scale,
            series: self
                .series
                .iter()
                .map(|s| ManifestEntry {
                    name: &s.name,
                    file: &s.file,
                    metric: &s.metric,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"
    }

    /// Writes every series CSV and `fig<id>_manifest.json` into `dir`;
    /// returns the manifest path.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for s in &self.series {
            s.table.write_csv(dir.join(&s.file))?;
        }
        let manifest = dir.join(format!("fig{}_manifest.json", self.id));
        std::fs::write(&manifest, self.manifest_json())?;
        Ok(manifest)
    }

    pub fn series_named(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_carry_the_published_settings() {
        let r3 = recipe(3).unwrap();
        let nts: Vec<usize> = r3.scenarios.iter().map(|c| c.n_transmit).collect();
        assert_eq!(nts, vec![8, 5, 4, 3]);
        assert!(r3.scenarios.iter().all(|c| c.n_active == 2));
        let r5 = recipe(5).unwrap();
        assert_eq!(r5.scenarios[1].power_coeffs, vec![0.7, 0.2, 0.1]);
        assert!(r5.scenarios.iter().all(|c| (c.n_transmit, c.n_active) == (5, 3)));
        assert_eq!(recipe(6).unwrap().scenarios.len(), 14);
        let err = recipe(7).unwrap_err();
        assert!(err.to_string().contains("unknown figure"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn figure3_has_eight_series() {
        let opts = FigureOptions {
            trials: Some(2000),
            snr_grid: Some(vec![0.0, 10.0]),
            ..Default::default()
        };
        let b = build_figure(3, &opts).unwrap();
        assert_eq!(b.series.len(), 8);
        assert!(b.series_named("Union bound, N_t = 8").is_some());
        assert!(b.manifest_json().contains("\"y_scale\": \"log\""));
    }
}

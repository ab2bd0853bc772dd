//! Command-line front end: `validate | analyze | simulate | figure | sweep`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    ber_bound_noma_user, ber_overall, gssk_a_parameter, pep_gssk_closed_form, pep_gssk_quadrature,
    rate_gssk, rate_noma_user, union_bound_gssk, CurveTable, SicResidue,
};
use crate::codebook::build_codebook;
use crate::config::{parse_snr_grid, validate_config, SystemConfig};
use crate::constellation::Psk;
use crate::error::{Error, Result};
use crate::figures::{build_figure, FigureOptions};
use crate::montecarlo::{
    run_gssk_ber_grid, run_noma_ber_grid, run_rate_curves, scenario_tag, AntennaKnowledge, Detector,
    EngineOptions,
};
use crate::specfun::SeriesControl;

#[derive(Debug, Parser)]
#[command(name = "ngssk", version, about = "NOMA + GSSK link-level simulator and analytical toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a scenario file.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Analytical PEP, union bounds, NOMA bounds and rates over the SNR grid.
    Analyze {
        /// Scenario file; repeat to put several scenarios in one table.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo BER and throughput curves.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "energy")]
        detector: Detector,
        #[command(flatten)]
        common: Common,
    },
    /// Data bundle for one of the built-in figures (3, 4, 5 or 6).
    Figure {
        id: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Throughput curves for a range of transmit-antenna counts.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Antenna counts as `a:b` (inclusive).
        #[arg(long, default_value = "2:8")]
        antennas: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Output file (or directory for `figure`); standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// SNR grid in dB as `a:step:b`.
    #[arg(long = "snr-grid")]
    snr_grid: Option<String>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Validate { config } => cmd_validate(&config).map(|cfg| {
            println!("ok: {} ({} SNR points)", scenario_tag(&cfg), cfg.snr_grid_db.len());
        }),
        Command::Analyze { config, common } => {
            let mut table = CurveTable::new();
            for path in &config {
                let cfg = load(path, &common)?;
                eprintln!("[analyze] {}", scenario_tag(&cfg));
                table.extend(cmd_analyze(&cfg)?);
            }
            emit(&table, common.out.as_deref())
        }
        Command::Simulate { config, detector, common } => {
            let cfg = load(&config, &common)?;
            eprintln!(
                "[simulate] {} detector={detector} trials={}",
                scenario_tag(&cfg),
                cfg.trials_per_point
            );
            emit(&cmd_simulate(&cfg, detector)?, common.out.as_deref())
        }
        Command::Figure { id, common } => {
            let opts = FigureOptions {
                trials: common.trials,
                seed: common.seed,
                snr_grid: common.snr_grid.as_deref().map(parse_snr_grid).transpose()?,
                engine: EngineOptions::default(),
            };
            let dir = common.out.unwrap_or_else(|| PathBuf::from(format!("fig{id}")));
            eprintln!("[figure] {id} -> {}", dir.display());
            let manifest = cmd_figure(id, &opts, &dir)?;
            println!("{}", manifest.display());
            Ok(())
        }
        Command::Sweep { config, antennas, common } => {
            let cfg = load(&config, &common)?;
            let (lo, hi) = parse_range(&antennas)?;
            emit(&cmd_sweep(&cfg, lo, hi)?, common.out.as_deref())
        }
    }
}

fn load(path: &Path, common: &Common) -> Result<SystemConfig> {
    let mut cfg = SystemConfig::from_file(path)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials_per_point = t;
    }
    if let Some(g) = &common.snr_grid {
        cfg.snr_grid_db = parse_snr_grid(g)?;
    }
    validate_config(cfg)
}

fn emit(table: &CurveTable, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write_csv(path),
        None => {
            table.check()?;
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::arg(format!("antenna range must look like `a:b`, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn cmd_validate(path: &Path) -> Result<SystemConfig> {
    SystemConfig::from_file(path)
}

/// Analytical curves for one scenario.
pub fn cmd_analyze(cfg: &SystemConfig) -> Result<CurveTable> {
    let cb = build_codebook(cfg.n_transmit, cfg.n_active)?;
    let psk = Psk::new(cfg.psk_order)?;
    let tag = scenario_tag(cfg);
    let mut t = CurveTable::new();
    for &db in &cfg.snr_grid_db {
        let snr = cfg.snr(db);
        let a = gssk_a_parameter(snr.rho_prime, cfg.total_power, cfg.noise_var, cfg.n_active)?;
        let quad = pep_gssk_quadrature(a)?.value;
        let closed = pep_gssk_closed_form(a, SeriesControl::default())?.value;
        let bound = union_bound_gssk(&cb, quad);
        t.push(db, "a", a, &tag);
        t.push(db, "pep_quadrature", quad, &tag);
        t.push(db, "pep_closed_form", closed, &tag);
        t.push(db, "union_bound", bound.raw, &tag);
        t.push(db, "union_bound_closed_form", union_bound_gssk(&cb, closed).raw, &tag);
        let mut user_bounds = Vec::new();
        let mut user_rates = Vec::new();
        for m in 1..=cfg.n_noma_users {
            let b = ber_bound_noma_user(m, cfg, &psk, snr, SicResidue::default())?;
            let r = rate_noma_user(m, cfg, snr)?;
            t.push(db, &format!("ber_bound_user{m}"), b, &tag);
            t.push(db, &format!("rate_user{m}"), r, &tag);
            user_bounds.push(b);
            user_rates.push(r);
        }
        let overall = ber_overall(bound.clamped, &user_bounds);
        t.push(db, "ber_noma_overall", overall.noma_raw, &tag);
        t.push(db, "ber_system_overall", overall.system_raw, &tag);
        let r_gssk = rate_gssk(bound.clamped, &cb);
        let r_noma: f64 = user_bounds
            .iter()
            .zip(&user_rates)
            .map(|(b, r)| (1.0 - b.clamp(0.0, 1.0)) * r)
            .sum();
        t.push(db, "r_gssk", r_gssk, &tag);
        t.push(db, "r_noma", r_noma, &tag);
        t.push(db, "r_total", r_gssk + r_noma, &tag);
    }
    Ok(t)
}

/// Simulated curves for one scenario.
pub fn cmd_simulate(cfg: &SystemConfig, detector: Detector) -> Result<CurveTable> {
    let tag = scenario_tag(cfg);
    let grid = &cfg.snr_grid_db;
    let opts = EngineOptions::default();
    let mut t = CurveTable::new();
    for r in run_gssk_ber_grid(cfg, detector, grid, opts)? {
        t.push_with_ci(r.snr_db, "spatial_ber", r.bit.ber, (r.bit.ci_low, r.bit.ci_high), &tag);
        t.push_with_ci(r.snr_db, "spatial_ser", r.symbol.ber, (r.symbol.ci_low, r.symbol.ci_high), &tag);
    }
    let noma = run_noma_ber_grid(cfg, AntennaKnowledge::Estimated, grid, opts)?;
    for (p, users) in noma.iter().enumerate() {
        for (m, e) in users.iter().enumerate() {
            t.push_with_ci(grid[p], &format!("ber_user{}", m + 1), e.ber, (e.ci_low, e.ci_high), &tag);
        }
    }
    t.extend(run_rate_curves(cfg, grid)?);
    Ok(t)
}

pub fn cmd_figure(id: u32, opts: &FigureOptions, out_dir: &Path) -> Result<PathBuf> {
    build_figure(id, opts)?.write(out_dir)
}

/// Throughput curves for `n_transmit` in `lo..=hi` (counts below `n_active` skipped).
pub fn cmd_sweep(cfg: &SystemConfig, lo: usize, hi: usize) -> Result<CurveTable> {
    let mut t = CurveTable::new();
    for nt in lo.max(cfg.n_active)..=hi {
        let mut c = cfg.clone();
        c.n_transmit = nt;
        let c = validate_config(c)?;
        eprintln!("[sweep] {}", scenario_tag(&c));
        t.extend(run_rate_curves(&c, &c.snr_grid_db)?);
    }
    Ok(t)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ldos_kit::compare::compare_spectra;
use ldos_kit::output::{read_spectrum, write_spectrum};
use ldos_kit::scenario::load_config;
use ldos_kit::sweep::{analytic_scenario, run_scenario, sweep_grid, sweep_height, write_heights};
use ldos_kit::validate::{Level, Suite, CRITERIA};

#[derive(Parser)]
#[command(name = "ldos-kit", version, about = "FDTD and analytic Purcell spectra")]
struct Cli {
    /// Worker threads for sweeps (default: LDOSKIT_THREADS, else all cores).
    #[arg(long, global = true, env = "LDOSKIT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    config: PathBuf,
    /// Output path; defaults to the config's `output` field.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// FDTD spectrum of one scenario.
    Run(Io),
    /// Analytic spectrum of one scenario.
    Analytic(Io),
    /// Peak Purcell factor versus source height.
    SweepHeight {
        #[command(flatten)]
        io: Io,
        /// Skip FDTD and fill only the analytic columns.
        #[arg(long)]
        analytic_only: bool,
    },
    /// The same scenario at several cell sizes; writes one CSV per size.
    SweepGrid {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Relative Purcell deviation of one CSV against a reference CSV.
    Compare {
        a: PathBuf,
        reference: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Built-in validation suite.
    Validate {
        #[arg(long, value_enum, default_value_t = LevelArg::Reduced)]
        level: LevelArg,
        /// Criterion numbers to run (default: all).
        #[arg(long = "criterion")]
        criteria: Vec<u32>,
        /// Scenario file; only checks that it parses and is runnable.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for the spectra computed along the way.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Reduced,
    Full,
}

fn out_path(io: &Io, fallback: Option<&String>, default: &str) -> PathBuf {
    io.out
        .clone()
        .or_else(|| fallback.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default))
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    match cli.command {
        Command::Run(io) => {
            let cfg = load_config(&io.config)?;
            let out = run_scenario(&cfg)?;
            let path = out_path(&io, cfg.output.as_ref(), "spectrum.csv");
            write_spectrum(&path, &out.rows())?;
            let s = out.spectrum();
            println!(
                "{}: {} steps, peak {:.4e} at {:.3} eV -> {}",
                cfg.hash(),
                out.record.steps,
                s.peak_purcell,
                s.peak_ev,
                path.display()
            );
            Ok(true)
        }
        Command::Analytic(io) => {
            let cfg = load_config(&io.config)?;
            let rows = analytic_scenario(&cfg)?;
            let path = out_path(&io, cfg.output.as_ref(), "analytic.csv");
            write_spectrum(&path, &rows)?;
            println!("{} rows -> {}", rows.len(), path.display());
            Ok(true)
        }
        Command::SweepHeight { io, analytic_only } => {
            let cfg = load_config(&io.config)?;
            let heights = cfg.sweep.clone().unwrap_or_default().z_over_a;
            let path = out_path(&io, cfg.output.as_ref(), "heights.csv");
            let dir = path.with_extension("spectra");
            let spectra = (!analytic_only).then_some(dir.as_path());
            let points = sweep_height(&cfg, &heights, !analytic_only, spectra)?;
            write_heights(&path, &points)?;
            println!("{} heights -> {}", points.len(), path.display());
            Ok(true)
        }
        Command::SweepGrid { io, tol } => {
            let cfg = load_config(&io.config)?;
            let deltas = cfg.sweep.clone().unwrap_or_default().delta_nm;
            if deltas.is_empty() {
                bail!("sweep.delta_nm is empty");
            }
            let dir = io.out.clone().unwrap_or_else(|| PathBuf::from("grid_sweep"));
            let runs = sweep_grid(&cfg, &deltas)?;
            for r in &runs {
                let p = dir.join(format!("delta_{:.3}nm.csv", r.delta_nm));
                write_spectrum(&p, &r.outcome.rows())?;
                let s = r.outcome.spectrum();
                println!(
                    "delta {} nm: peak {:.4e} at {:.3} eV -> {}",
                    r.delta_nm,
                    s.peak_purcell,
                    s.peak_ev,
                    p.display()
                );
            }
            let mut pass = true;
            for w in runs.windows(2) {
                let c = ldos_kit::sweep::compare_runs(&w[0].outcome, &w[1].outcome, tol)?;
                println!(
                    "delta {} vs {}: max {:.3e} at {:.3} eV, median {:.3e}",
                    w[0].delta_nm, w[1].delta_nm, c.max_rel, c.worst_energy_ev, c.median_rel
                );
                pass &= c.pass;
            }
            Ok(pass)
        }
        Command::Compare { a, reference, tol } => {
            let r = compare_spectra(&read(&a)?, &read(&reference)?, tol)?;
            println!("{}", serde_json::to_string(&r)?);
            Ok(r.pass)
        }
        Command::Validate {
            level,
            criteria,
            config,
            out,
        } => {
            if let Some(p) = config {
                let cfg = load_config(&p)?;
                cfg.plan()?;
                println!("{}: ok ({})", p.display(), cfg.hash());
                return Ok(true);
            }
            let mut suite = Suite::new(match level {
                LevelArg::Reduced => Level::Reduced,
                LevelArg::Full => Level::Full,
            });
            suite.verbose = true;
            suite.out_dir = out;
            let ids: Vec<u32> = if criteria.is_empty() {
                CRITERIA.iter().map(|c| c.0).collect()
            } else {
                criteria
            };
            let mut pass = true;
            for id in ids {
                let r = suite.criterion(id);
                print!("{}", r.render());
                pass &= r.pass();
            }
            Ok(pass)
        }
    }
}

fn read(p: &Path) -> anyhow::Result<Vec<ldos_kit::output::SpectrumRow>> {
    read_spectrum(p).with_context(|| format!("reading {}", p.display()))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use adrc_core::analysis::{
    bin_width, bound_check, dominant_peak, error_spectrum, tune_omega, write_spectrum_csv,
    BoundCheckParams, ControlCheck,
};
use adrc_core::compare::{compare, compare_csv, compare_median};
use adrc_core::document::load_scenario;
use adrc_core::simkernel::{run_scenario, Series};
use adrc_core::Error;

const EXIT_DIVERGED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_TUNING: u8 = 3;
const EXIT_BOUND_VIOLATED: u8 = 4;

#[derive(Parser)]
#[command(name = "adrc-bench", version, about = "Extended state observer benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write run.csv and summary.txt.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides sim.seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run all six observers of a benchmark scenario (1 or 2).
    Compare {
        scenario: u8,
        /// Directory for compare_scenario<N>.csv; the table is printed either way.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed; observer i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Repeat with this many base seeds and report medians.
        #[arg(long, default_value_t = 1)]
        repeats: u64,
    },
    /// Find the bandwidth omega_o that reaches a target J_e.
    Tune {
        config: PathBuf,
        #[arg(long)]
        target_je: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [10.0, 1000.0])]
        bracket: Vec<f64>,
        /// Relative tolerance on J_e.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Periodogram of the tracking error in a run.csv.
    Spectrum {
        run: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start of the analysed segment in seconds; defaults to the middle of the run.
        #[arg(long)]
        from: Option<f64>,
    },
    /// Check a run of ESO n=3 against its input-to-state bounds.
    BoundCheck {
        run: PathBuf,
        config: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        nu: f64,
        /// Lyapunov weight of the tracking-error bound.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Writes t,actual,bound for the observation error.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Diverged(_) => EXIT_DIVERGED,
        Error::Bracket { .. } => EXIT_TUNING,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed } => cmd_run(&config, &out, seed),
        Command::Compare {
            scenario,
            out,
            seed,
            repeats,
        } => cmd_compare(scenario, out.as_deref(), seed, repeats),
        Command::Tune {
            config,
            target_je,
            bracket,
            tol,
        } => cmd_tune(&config, target_je, (bracket[0], bracket[1]), tol),
        Command::Spectrum { run, out, from } => cmd_spectrum(&run, out.as_deref(), from),
        Command::BoundCheck {
            run,
            config,
            nu,
            rho,
            out,
        } => cmd_bound_check(&run, &config, nu, rho, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_run(config: &Path, out: &Path, seed: Option<u64>) -> adrc_core::Result<u8> {
    let mut cfg = load_scenario(config)?;
    if let Some(s) = seed {
        cfg.sim.seed = s;
    }
    let rec = run_scenario(&cfg)?;
    rec.write_dir(out)?;
    print!("{}", rec.summary());
    if let Some(t) = rec.diverged_at {
        eprintln!("error: simulation diverged at t = {t}");
        return Ok(EXIT_DIVERGED);
    }
    Ok(0)
}

fn cmd_compare(scenario: u8, out: Option<&Path>, seed: u64, repeats: u64) -> adrc_core::Result<u8> {
    let rows = if repeats <= 1 {
        compare(scenario, seed)?
    } else {
        let seeds: Vec<u64> = (0..repeats).map(|j| seed + 100 * j).collect();
        compare_median(scenario, &seeds)?
    };
    let table = compare_csv(&rows);
    print!("{table}");
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("compare_scenario{scenario}.csv")), &table)?;
    }
    if rows.iter().any(|r| r.criteria.is_none()) {
        return Ok(EXIT_DIVERGED);
    }
    Ok(0)
}

fn cmd_tune(config: &Path, target: f64, bracket: (f64, f64), tol: f64) -> adrc_core::Result<u8> {
    let cfg = load_scenario(config)?;
    let r = tune_omega(target, &cfg, bracket, tol)?;
    println!("omega_o = {}", r.omega_o);
    println!("J_e = {}", r.je);
    println!("iterations = {}", r.iterations);
    println!("converged = {}", r.converged);
    Ok(if r.converged { 0 } else { EXIT_TUNING })
}

fn cmd_spectrum(run: &Path, out: Option<&Path>, from: Option<f64>) -> adrc_core::Result<u8> {
    let series = Series::read_csv(run)?;
    let dt = series.dt()?;
    let from = from.unwrap_or_else(|| 0.5 * (series.t[0] + series.t[series.len() - 1]));
    let seg = series.tail_from(from);
    let bins = error_spectrum(&seg.e, dt)?;
    if let Some(path) = out {
        write_spectrum_csv(&bins, path)?;
    }
    println!("segment_start = {from}");
    println!("bin_width_rad_s = {}", bin_width(seg.len(), dt));
    if let Some(k) = dominant_peak(&bins) {
        println!("peak_omega_rad_s = {}", bins[k].omega);
        println!("peak_magnitude = {}", bins[k].magnitude);
    }
    Ok(0)
}

fn cmd_bound_check(
    run: &Path,
    config: &Path,
    nu: f64,
    rho: f64,
    out: Option<&Path>,
) -> adrc_core::Result<u8> {
    let cfg = load_scenario(config)?;
    let series = Series::read_csv(run)?;
    let params = BoundCheckParams {
        variant: cfg.observer.variant,
        omega_o: cfg.observer.omega_o,
        nu,
        control: Some(ControlCheck {
            kp: cfg.controller.kp,
            kd: cfg.controller.kd,
            rho,
            t_on: cfg.controller.t_on,
        }),
    };
    let report = bound_check(&series, &params)?;
    if let Some(path) = out {
        report.write_csv(path)?;
    }
    println!("observer_min_margin = {}", report.min_margin);
    println!("observer_worst_t = {}", report.worst_t);
    if let Some(c) = &report.control {
        println!("control_min_margin = {}", c.min_margin);
        println!("control_worst_t = {}", c.worst_t);
    }
    if report.pass() {
        println!("PASS");
        Ok(0)
    } else {
        println!("FAIL");
        Ok(EXIT_BOUND_VIOLATED)
    }
}

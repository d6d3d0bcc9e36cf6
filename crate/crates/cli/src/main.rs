//! `semisic`: construct semi-SIC POVMs, maximize and certify the witness,
//! sweep the family parameter and run the brute-force oracle.
//!
//! Exit codes: 0 success or certification pass, 1 certification fail,
//! 2 usage or input error.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde_json::json;

use semisic_core::bloch::gram;
use semisic_core::optimizer::{seesaw, SeesawConfig};
use semisic_core::oracle::{mu_grid_scan, random_search_max, verify_mean_bound, write_mu_grid_csv};
use semisic_core::povm::{
    build_semi_sic, check_b, disphenoid_edges, is_extremal_four_outcome, pairwise_trace_products, target_gram_entries,
    SemiSicParams,
};
use semisic_core::report::{fmt_sig17, to_json};
use semisic_core::selftest::{run_full_certification, CertificationConfig};
use semisic_core::witness::{q_of_b, q_prime, SignBranch, WitnessSpec};

#[derive(Parser)]
#[command(name = "semisic", version, about = "Semi-SIC POVMs: construction, witness maximization and self-testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the semi-SIC POVM for a given B and report derived quantities.
    Construct {
        #[arg(long = "B")]
        b: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize the witness and certify states and the fourth measurement.
    Certify {
        #[arg(long = "B")]
        b: f64,
        #[command(flatten)]
        search: SearchArgs,
        /// Penalty weight of the extended witness.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed forms against see-saw values on a grid of B (CSV).
    Sweep {
        #[arg(long = "B-min")]
        b_min: f64,
        #[arg(long = "B-max")]
        b_max: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force random search, mu grid and mean-bound check (JSON).
    Oracle {
        #[arg(long = "B")]
        b: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Points of the mu_1 grid over [-1, 1].
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Random direction triples for the mean-bound check.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the mu grid as CSV (columns mu1,max_W).
        #[arg(long)]
        grid_csv: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct SearchArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
}

impl SearchArgs {
    fn seesaw(self) -> SeesawConfig {
        SeesawConfig { seed: self.seed, restarts: self.restarts, ..SeesawConfig::default() }
    }
}

fn init_logging() {
    let level = match std::env::var("SEMISIC_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).target(env_logger::Target::Stderr).init();
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            f.write_all(body)?;
        }
        None => io::stdout().lock().write_all(body)?,
    }
    Ok(())
}

fn construct(b: f64, out: Option<&Path>) -> Result<ExitCode> {
    let params = SemiSicParams::new(b)?;
    let povm = build_semi_sic(b)?;
    let doc = json!({
        "B": b,
        "params": params,
        "povm": povm,
        "edges": disphenoid_edges(&povm)?,
        "pairwise_trace_products": pairwise_trace_products(&povm),
        "extremality": is_extremal_four_outcome(&povm)?,
    });
    emit(out, to_json(&doc)?.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn certify(b: f64, search: SearchArgs, k: f64, tol: f64, out: Option<&Path>) -> Result<ExitCode> {
    if search.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let config = CertificationConfig { seesaw: search.seesaw(), k, tol };
    let report = run_full_certification(b, &config)?;
    info!("{report}");
    emit(out, to_json(&report)?.as_bytes())?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sweep(b_min: f64, b_max: f64, steps: usize, search: SearchArgs, out: Option<&Path>) -> Result<ExitCode> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if search.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    check_b(b_min)?;
    check_b(b_max)?;
    if b_min > b_max {
        bail!("--B-min {b_min} exceeds --B-max {b_max}");
    }
    let config = search.seesaw();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["B", "c1", "c2", "Q_analytic", "Q_seesaw", "Q_prime", "gram_residual"])?;
    for i in 0..steps {
        let b = if steps == 1 { b_min } else { b_min + (b_max - b_min) * i as f64 / (steps - 1) as f64 };
        let spec = WitnessSpec::from_b(b, SignBranch::Positive)?;
        let run = seesaw(&spec, &config)?;
        let g = gram(&run.strategy.state_vectors())?;
        let target = target_gram_entries(b);
        let mut residual = 0.0f64;
        for (r, row) in target.iter().enumerate() {
            for (c, t) in row.iter().enumerate() {
                residual = residual.max((g.get(r, c) - t).abs());
            }
        }
        debug!("B = {b}: see-saw value {} after {} rounds", run.value, run.iterations);
        let row = [b, spec.c1, spec.c2, q_of_b(b)?, run.value, q_prime(spec.c1, spec.c2), residual];
        wtr.write_record(row.iter().map(|v| fmt_sig17(*v)))?;
    }
    let body = wtr.into_inner().context("flushing CSV")?;
    emit(out, &body)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    b: f64,
    samples: usize,
    seed: u64,
    grid: usize,
    trials: usize,
    out: Option<&Path>,
    grid_csv: Option<&Path>,
) -> Result<ExitCode> {
    let spec = WitnessSpec::from_b(b, SignBranch::Positive)?;
    let best = random_search_max(&spec, samples, seed)?;
    info!("random search best {} (sample {})", best.value, best.sample);
    let scan = mu_grid_scan(&spec, grid, seed)?;
    let bound = verify_mean_bound(&spec, trials, seed)?;
    let doc = json!({
        "B": b,
        "c1": spec.c1,
        "c2": spec.c2,
        "q_of_b": q_of_b(b)?,
        "q_prime": q_prime(spec.c1, spec.c2),
        "seed": seed,
        "random_search": best,
        "mu_grid": scan,
        "mean_bound": bound,
    });
    if let Some(path) = grid_csv {
        let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        write_mu_grid_csv(&scan, f)?;
    }
    emit(out, to_json(&doc)?.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct { b, out } => construct(b, out.as_deref()),
        Command::Certify { b, search, k, tol, out } => certify(b, search, k, tol, out.as_deref()),
        Command::Sweep { b_min, b_max, steps, search, out } => sweep(b_min, b_max, steps, search, out.as_deref()),
        Command::Oracle { b, samples, seed, grid, trials, out, grid_csv } => {
            oracle(b, samples, seed, grid, trials, out.as_deref(), grid_csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

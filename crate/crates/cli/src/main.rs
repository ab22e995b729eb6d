//! Command-line front end: order recovery, peak-to-trough estimation,
//! simulation runs, permutation metrics, and adversarial instances.
//!
//! Exit codes: 0 on success, 2 on input/validation problems, 3 when an
//! iterative solver fails to converge.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use permrec::estimators::{estimate, estimate_blp, estimate_ptr, EstimatorKind, LogBase};
use permrec::harness::{emit, emit_raw, run_experiment, EmitFormat, ExperimentConfig};
use permrec::metrics::LossReport;
use permrec::models::{hard_instance, HardInstanceKind};
use permrec::spectra::DEFAULT_TOL;
use permrec::{io, Error};

#[derive(Parser)]
#[command(
    name = "permrec",
    about = "Recover the hidden column order of noisy monotone matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Blp,
    Mean,
    Max,
    Svd,
}

impl From<MethodArg> for EstimatorKind {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Blp => EstimatorKind::Blp,
            MethodArg::Mean => EstimatorKind::Mean,
            MethodArg::Max => EstimatorKind::Max,
            MethodArg::Svd => EstimatorKind::Svd,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogBaseArg {
    E,
    #[value(name = "2")]
    Two,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> Self {
        match b {
            LogBaseArg::E => LogBase::Natural,
            LogBaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Exact,
    Partial,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the column ordering of a matrix CSV.
    Recover(RecoverArgs),
    /// Fit per-sample peak-to-trough ratios along a column ordering.
    Ptr(PtrArgs),
    /// Run a Monte Carlo experiment from a JSON config.
    Simulate(SimulateArgs),
    /// Compare two permutation files under all losses.
    Metrics(MetricsArgs),
    /// Emit a near-threshold adversarial instance.
    HardInstance(HardInstanceArgs),
}

#[derive(Args)]
struct RecoverArgs {
    /// Input matrix CSV (rows = samples, columns = items).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "blp")]
    method: MethodArg,
    /// Residual tolerance for the spectral methods.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Skip one header row in the input.
    #[arg(long)]
    header: bool,
    /// Output CSV: rows `field,index,value` with fields order/weight/score.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct PtrArgs {
    /// Input matrix CSV of log-scale coverages.
    #[arg(long)]
    input: PathBuf,
    /// Ordering file (single column, 1-based), or `auto` to recover one.
    #[arg(long)]
    order: String,
    #[arg(long = "log-base", value_enum, default_value = "e")]
    log_base: LogBaseArg,
    /// Skip one header row in the input.
    #[arg(long)]
    header: bool,
    /// Residual tolerance when `--order auto` runs the recovery first.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output CSV: rows `sample,eptr` (samples 1-based).
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config JSON (strict: unknown keys are rejected).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads (0 = all available).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output directory for aggregates.csv / aggregates.json / raw_losses.csv.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// First permutation file (single column, 1-based).
    #[arg(long)]
    a: PathBuf,
    /// Second permutation file (single column, 1-based).
    #[arg(long)]
    b: PathBuf,
    /// Minimize each loss over the second permutation and its reversal.
    #[arg(long = "up-to-reversal")]
    up_to_reversal: bool,
}

#[derive(Args)]
struct HardInstanceArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    sigma: f64,
    /// Gap scale for the partial-recovery instance (needs t >= 2 sigma).
    #[arg(long)]
    t: Option<f64>,
    /// Which member of the exact-recovery family (0 = identity).
    #[arg(long, default_value_t = 0)]
    which: usize,
    /// Output CSV for the signal matrix; the paired permutation prints to
    /// stdout.
    #[arg(long)]
    output: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Recover(args) => cmd_recover(args),
        Command::Ptr(args) => cmd_ptr(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::HardInstance(args) => cmd_hard_instance(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        let code = match e {
            Error::NoConvergence { .. } => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn cmd_recover(args: RecoverArgs) -> permrec::Result<()> {
    let y = io::read_matrix(&args.input, args.header)?;
    let out = estimate(args.method.into(), &y, args.tol)?;

    let mut text = String::from("field,index,value\n");
    for (pos, col) in out.permutation.iter().enumerate() {
        text.push_str(&format!("order,{},{}\n", pos + 1, col + 1));
    }
    if let Some(w) = &out.projection_vector {
        for (i, v) in w.iter().enumerate() {
            text.push_str(&format!("weight,{},{}\n", i + 1, v));
        }
    }
    if let Some(s) = &out.projection_scores {
        for (j, v) in s.iter().enumerate() {
            text.push_str(&format!("score,{},{}\n", j + 1, v));
        }
    }
    fs::write(&args.output, text)?;
    if out.degenerate {
        eprintln!("warning: scores carried no ordering information; identity returned");
    }
    println!(
        "{}: wrote ordering of {} columns to {}",
        out.method.name(),
        y.p(),
        args.output.display()
    );
    Ok(())
}

fn cmd_ptr(args: PtrArgs) -> permrec::Result<()> {
    let y = io::read_matrix(&args.input, args.header)?;
    let order = if args.order == "auto" {
        estimate_blp(&y, args.tol)?.permutation
    } else {
        io::read_permutation(PathBuf::from(&args.order).as_path())?
    };
    let ptrs = estimate_ptr(&y, &order, args.log_base.into())?;
    let mut text = String::from("sample,eptr\n");
    for (i, v) in ptrs.iter().enumerate() {
        text.push_str(&format!("{},{}\n", i + 1, v));
    }
    fs::write(&args.output, text)?;
    println!("wrote {} ratios to {}", ptrs.len(), args.output.display());
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> permrec::Result<()> {
    let text = fs::read_to_string(&args.config)?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("config: {e}")))?;
    let result = run_experiment(&config, args.jobs)?;

    fs::create_dir_all(&args.output)?;
    fs::write(
        args.output.join("aggregates.csv"),
        emit(&result, EmitFormat::Csv)?,
    )?;
    fs::write(
        args.output.join("aggregates.json"),
        emit(&result, EmitFormat::Json)?,
    )?;
    if let Some(raw) = emit_raw(&result) {
        fs::write(args.output.join("raw_losses.csv"), raw)?;
    }

    let failed = result.points.iter().filter(|p| p.error.is_some()).count();
    println!(
        "{} grid points x {} replications written to {}{}",
        result.points.len(),
        config.replications,
        args.output.display(),
        if failed > 0 {
            format!(" ({failed} points failed; see aggregates.csv)")
        } else {
            String::new()
        }
    );
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> permrec::Result<()> {
    let a = io::read_permutation(&args.a)?;
    let b = io::read_permutation(&args.b)?;
    let report = if args.up_to_reversal {
        LossReport::up_to_reversal(&a, &b)?
    } else {
        LossReport::direct(&a, &b)?
    };
    println!("zero_one: {}", report.zero_one);
    println!("kendall_tau: {}", report.kendall_tau);
    println!("spearman_footrule: {}", report.spearman_footrule);
    if args.up_to_reversal {
        println!("reversal_used: {}", report.reversal_used);
    }
    Ok(())
}

fn cmd_hard_instance(args: HardInstanceArgs) -> permrec::Result<()> {
    let (kind, t) = match args.kind {
        KindArg::Exact => (HardInstanceKind::ExactLb, 0.0),
        KindArg::Partial => {
            let t = args.t.ok_or_else(|| {
                Error::Domain("--t is required for the partial instance".into())
            })?;
            (HardInstanceKind::PartialLb, t)
        }
    };
    let (theta, pi) = hard_instance(args.p, args.n, args.sigma, kind, args.which, t)?;
    io::write_matrix(&args.output, &theta)?;
    let one_based: Vec<String> = pi.iter().map(|v| (v + 1).to_string()).collect();
    println!("permutation: {}", one_based.join(","));
    println!(
        "wrote {} x {} signal matrix to {}",
        theta.n(),
        theta.p(),
        args.output.display()
    );
    Ok(())
}

//! `hbc` — validate Hadamard broadcast channels, evaluate ensemble rates,
//! trace capacity frontiers, and run the classical brute-force oracle.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O or parse error,
//! 3 domain error (not classical, size limit), 4 numerical failure.

mod docs;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hbc::entropic::Task;
use hbc::region::{classical_oracle_frontier, optimize_frontier, Frontier, OptimizationConfig};

/// Machine-parsable failure category; printed as `error[<category>]: ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Validation,
    Io,
    Parse,
    Domain,
    Numerical,
}

impl Category {
    fn label(self) -> &'static str {
        match self {
            Category::Validation => "validation",
            Category::Io => "io",
            Category::Parse => "parse",
            Category::Domain => "domain",
            Category::Numerical => "numerical",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Category::Validation => 1,
            Category::Io | Category::Parse => 2,
            Category::Domain => 3,
            Category::Numerical => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    category: Category,
    message: String,
}

impl CliError {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        Self {
            category,
            message: message.into(),
        }
    }

    fn from_core(err: hbc::Error) -> Self {
        let category = match err {
            hbc::Error::InvalidDims(_)
            | hbc::Error::InvalidState(_)
            | hbc::Error::InvalidSpec(_)
            | hbc::Error::InvalidEnsemble(_)
            | hbc::Error::InvalidParameters(_) => Category::Validation,
            hbc::Error::NotClassical(_) | hbc::Error::SizeLimit(_) => Category::Domain,
            hbc::Error::NotHermitian { .. } | hbc::Error::NoConvergence(_) => Category::Numerical,
        };
        Self::new(category, err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "hbc",
    about = "Hadamard broadcast channels: structure checks, rate evaluation, capacity frontiers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a channel file against its defining invariants.
    Validate { channel: PathBuf },
    /// Verify that prepare∘measure∘(channel to Bob) equals the channel to
    /// Charlie, as a Choi trace distance.
    DegradeCheck {
        channel: PathBuf,
        /// Largest residual accepted as equal.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Evaluate one ensemble's rates on a channel.
    Evaluate { channel: PathBuf, ensemble: PathBuf },
    /// Trace the capacity frontier for one task.
    Frontier {
        channel: PathBuf,
        #[command(flatten)]
        options: FrontierOptions,
    },
    /// Brute-force frontier of a classically-embedded channel.
    Oracle {
        channel: PathBuf,
        /// Probability grid resolution (steps of 1/G).
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FrontierOptions {
    /// Communication task: cc, cq, or eac.
    #[arg(long)]
    task: String,
    /// Auxiliary alphabet size |W| (default d_A²+1).
    #[arg(long)]
    num_w: Option<usize>,
    /// Per-w alphabet size |Z|, cc only (default d_A²).
    #[arg(long)]
    num_z: Option<usize>,
    /// Scalarization weights in [0,1].
    #[arg(long, default_value_t = 33)]
    lambdas: usize,
    /// Random restarts per weight.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Objective evaluations per local search.
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Convergence threshold in bits.
    #[arg(long, default_value_t = 1e-7)]
    obj_tol: f64,
    /// Worker threads (results are identical for any value).
    #[arg(long)]
    workers: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a self-contained SVG scatter.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.category.label(), e.message);
            ExitCode::from(e.category.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { channel } => validate(&channel),
        Command::DegradeCheck { channel, tol } => degrade_check(&channel, tol),
        Command::Evaluate { channel, ensemble } => evaluate(&channel, &ensemble),
        Command::Frontier { channel, options } => frontier(&channel, options),
        Command::Oracle { channel, grid, out } => oracle(&channel, grid, out.as_deref()),
    }
}

fn validate(path: &std::path::Path) -> Result<(), CliError> {
    // Parse structurally but report all numeric invariants, pass or fail.
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(Category::Io, format!("cannot read {}: {e}", path.display())))?;
    let doc: docs::ChannelDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::new(Category::Parse, format!("{}: {e}", path.display())))?;
    let spec = doc.into_spec()?;
    let report = spec.validate();

    println!("d_A={}", report.d_a);
    println!("d_C={}", report.d_c);
    println!("n_outcomes={}", report.n_outcomes);
    println!(
        "completeness_residual={:.6e} tol={:.0e} ok={}",
        report.completeness_residual,
        hbc::channel::COMPLETENESS_TOL,
        report.completeness_ok()
    );
    if !report.completeness_ok() {
        println!(
            "completeness_worst_entry=({},{})",
            report.worst_completeness_entry.0, report.worst_completeness_entry.1
        );
    }
    println!("state_norms_ok={}", report.state_norms_ok());
    for (idx, norm) in report.bad_state_norms() {
        println!("state_norm[{idx}]={norm:.9}");
    }
    if report.passed() {
        println!("result=PASS");
        Ok(())
    } else {
        println!("result=FAIL");
        Err(CliError::new(
            Category::Validation,
            format!("{} failed validation", path.display()),
        ))
    }
}

fn degrade_check(path: &std::path::Path, tol: f64) -> Result<(), CliError> {
    let spec = docs::parse_channel_file(path)?;
    let residual = spec.verify_degradability().map_err(CliError::from_core)?;
    println!("choi_residual={residual:.6e}");
    println!("threshold={tol:.0e}");
    if residual <= tol {
        println!("result=PASS");
        Ok(())
    } else {
        println!("result=FAIL");
        Err(CliError::new(
            Category::Validation,
            format!("degradability residual {residual:.6e} exceeds {tol:.0e}"),
        ))
    }
}

fn evaluate(channel: &std::path::Path, ensemble: &std::path::Path) -> Result<(), CliError> {
    let spec = docs::parse_channel_file(channel)?;
    let ens = docs::parse_ensemble_file(ensemble, &spec)?;
    let triple = hbc::entropic::rates(&spec, &ens).map_err(CliError::from_core)?;
    println!("task={}", ens.task.as_str());
    println!("primary_rate={:.9}", triple.primary_rate);
    println!("charlie_rate_c={:.9}", triple.charlie_rate_c);
    println!("charlie_rate_b={:.9}", triple.charlie_rate_b);
    if let Some(sum) = triple.sum_rate {
        println!("sum_rate={sum:.9}");
    }
    Ok(())
}

fn parse_task(s: &str) -> Result<Task, CliError> {
    Task::parse(s).ok_or_else(|| {
        CliError::new(
            Category::Parse,
            format!("unknown task {s:?} (expected cc, cq, or eac)"),
        )
    })
}

fn frontier(channel: &std::path::Path, options: FrontierOptions) -> Result<(), CliError> {
    let spec = docs::parse_channel_file(channel)?;
    let task = parse_task(&options.task)?;
    let mut config = OptimizationConfig::default_for(spec.d_a());
    if let Some(w) = options.num_w {
        config.num_w = w;
    }
    if let Some(z) = options.num_z {
        config.num_z = z;
    }
    config.lambda_grid = options.lambdas;
    config.restarts = options.restarts;
    config.seed = options.seed;
    config.max_iters = options.max_iters;
    config.obj_tol = options.obj_tol;
    if let Some(w) = options.workers {
        config.workers = w.max(1);
    }
    let frontier = optimize_frontier(&spec, task, &config).map_err(CliError::from_core)?;
    write_frontier(&frontier, options.out.as_deref())?;
    if let Some(plot) = options.plot.as_deref() {
        emit::emit_frontier_svg(&frontier, plot)?;
    }
    Ok(())
}

fn oracle(
    channel: &std::path::Path,
    grid: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let spec = docs::parse_channel_file(channel)?;
    let frontier = classical_oracle_frontier(&spec, grid).map_err(CliError::from_core)?;
    write_frontier(&frontier, out)
}

fn write_frontier(frontier: &Frontier, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => emit::emit_frontier_csv(frontier, path),
        None => {
            print!("{}", frontier.to_csv_string());
            Ok(())
        }
    }
}

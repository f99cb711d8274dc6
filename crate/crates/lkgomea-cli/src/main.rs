//! `lkg` — experiment harness: generate benchmark instances, run seeded
//! experiment grids, and turn the run reports into tables and plot data.

mod analyze;
mod commands;
mod plan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::OutputLayout;
use crate::plan::Plan;

#[derive(Debug)]
pub enum CliError {
    /// bad arguments or plan contents (exit 1)
    Usage(String),
    /// filesystem or malformed-data trouble (exit 2)
    Io(String),
    /// incomplete cells present (exit 3)
    Incomplete(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Incomplete(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Incomplete(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "lkg",
    version,
    about = "Benchmark harness for GOMEA with linkage kernels"
)]
struct Cli {
    /// Output directory (overrides the plan's output_dir)
    #[arg(long, global = true, env = "LKG_OUT")]
    out: Option<PathBuf>,
    /// Worker thread count for parallel cells
    #[arg(long, global = true, env = "LKG_WORKERS")]
    workers: Option<usize>,
    /// Run everything sequentially
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every instance in the plan's problem grid
    Generate { plan: PathBuf },
    /// Execute all (problem, algorithm, repeat) cells, skipping completed ones
    Run {
        plan: PathBuf,
        /// Redo cells even when their report exists
        #[arg(long)]
        force: bool,
    },
    /// Emit tables and plot data from a directory of run reports
    Analyze {
        reports: PathBuf,
        /// Directory of reference fronts for hypervolume recomputation
        #[arg(long)]
        fronts: Option<PathBuf>,
        /// Output directory for tables (default: <reports>/../analysis)
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// Exact optimum of a small instance file by exhaustive enumeration
    SolveExact { instance: PathBuf },
    /// Build reference fronts for the plan's multi-objective problems
    RefFront { plan: PathBuf },
}

fn configure_workers(workers: Option<usize>, sequential: bool) {
    if sequential {
        lkgomea::exec::set_parallel(false);
        return;
    }
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        if n <= 1 {
            lkgomea::exec::set_parallel(false);
        } else {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_workers(cli.workers, cli.sequential);
    match cli.command {
        Command::Generate { plan } => {
            let plan = Plan::load(&plan)?;
            let out = OutputLayout::new(&plan, cli.out.as_deref());
            let count = commands::cmd_generate(&plan, &out)?;
            println!("generated {count} instance(s) under {}", out.instances().display());
            Ok(())
        }
        Command::Run { plan, force } => {
            let plan = Plan::load(&plan)?;
            let out = OutputLayout::new(&plan, cli.out.as_deref());
            let (executed, skipped) = commands::cmd_run(&plan, &out, force)?;
            println!(
                "ran {executed} cell(s), skipped {skipped} completed; reports in {}",
                out.reports().display()
            );
            Ok(())
        }
        Command::Analyze {
            reports,
            fronts,
            tables,
        } => {
            let outputs =
                analyze::cmd_analyze(&reports, fronts.as_deref(), tables.as_deref())?;
            if outputs > 0 {
                println!("wrote {outputs} analysis file(s)");
            }
            Ok(())
        }
        Command::SolveExact { instance } => {
            let (value, genotype) = commands::cmd_solve_exact(&instance)?;
            println!("optimum {value}");
            println!("genotype {genotype}");
            Ok(())
        }
        Command::RefFront { plan } => {
            let plan = Plan::load(&plan)?;
            if !commands::plan_has_mo_problems(&plan) {
                println!("plan has no multi-objective problems");
                return Ok(());
            }
            let out = OutputLayout::new(&plan, cli.out.as_deref());
            let built = commands::cmd_ref_front(&plan, &out)?;
            println!("built {built} reference front(s) in {}", out.fronts().display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not usage errors
            if err.use_stderr() {
                eprintln!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

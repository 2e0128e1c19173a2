use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use undernewton::problems::Dims;
use undernewton::{BenchmarkId, StepRule};
use undernewton_cli::commands::{self, RunSpec, EXIT_USAGE};
use undernewton_cli::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "undernewton", version, about = "Newton-type solver for under-determined systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one benchmark and write its trace as CSV and SVG.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Step rule: project or polyak.
        #[arg(long, default_value = "project")]
        rule: StepRule,
    },
    /// Run both step rules from the same start and overlay them.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification suite: linalg, nd, rates or all.
    Verify { suite: Suite },
    /// List benchmark ids and dimensions.
    List,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long)]
    benchmark: BenchmarkId,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// `<m>x<n>` for sigmoid, `<n>` for lcp.
    #[arg(long)]
    dims: Option<Dims>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    residual_tol: Option<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl CommonArgs {
    fn into_spec(self, rule: StepRule) -> RunSpec {
        RunSpec {
            benchmark: self.benchmark,
            rule,
            seed: self.seed,
            dims: self.dims,
            max_iter: self.max_iter,
            residual_tol: self.residual_tol,
            output_dir: self.out,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    let mut stdout = io::stdout().lock();
    let result = match cli.command {
        Command::Run { common, rule } => commands::run(&common.into_spec(rule), &mut stdout),
        Command::Compare { common } => {
            commands::compare(&common.into_spec(StepRule::ProjectCurrent), &mut stdout)
        }
        Command::Verify { suite } => Ok(commands::verify(suite, &mut stdout)),
        Command::List => {
            commands::list(&mut stdout);
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

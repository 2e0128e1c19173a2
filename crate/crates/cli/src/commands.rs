use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use undernewton::diagnostics::estimate_tail_order;
use undernewton::problems::{instantiate, Dims};
use undernewton::solver::solve;
use undernewton::{BenchmarkId, Error, SolveConfig, SolveStatus, StepRule};

use crate::report::{compare_csv, convergence_svg, trace_csv};
use crate::verify::{run_suite, Suite, RATE_FLOOR, TAIL_PAIRS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MAX_ITER: i32 = 2;
pub const EXIT_RANK_DEFICIENT: i32 = 3;

pub fn exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::ResidualConverged | SolveStatus::StepConverged => EXIT_OK,
        SolveStatus::MaxIterations | SolveStatus::NonFinite => EXIT_MAX_ITER,
        SolveStatus::RankDeficientAbort => EXIT_RANK_DEFICIENT,
    }
}

/// One benchmark run as requested on the command line.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub benchmark: BenchmarkId,
    pub rule: StepRule,
    pub seed: u64,
    pub dims: Option<Dims>,
    pub max_iter: Option<usize>,
    pub residual_tol: Option<f64>,
    pub output_dir: PathBuf,
}

impl RunSpec {
    pub fn config(&self) -> SolveConfig {
        let mut cfg = SolveConfig::default();
        if let Some(n) = self.max_iter {
            cfg.max_iter = n;
        }
        if let Some(t) = self.residual_tol {
            cfg.residual_tol = t;
        }
        cfg
    }
}

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Io { path: PathBuf, source: io::Error },
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(msg) => write!(f, "{msg}"),
            CommandError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Usage(e.to_string())
    }
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CommandError> {
    fs::write(path, contents).map_err(|source| CommandError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(dir).map_err(|source| CommandError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Solves one benchmark and writes `<benchmark>_<rule>_<seed>.{csv,svg}`.
/// Returns the exit code for the final status.
pub fn run(spec: &RunSpec, out: &mut dyn Write) -> Result<i32, CommandError> {
    let inst = instantiate(spec.benchmark, spec.seed, spec.dims)?;
    let trace = solve(&inst.problem, &inst.x0, spec.rule, &spec.config())?;

    ensure_dir(&spec.output_dir)?;
    let stem = format!("{}_{}_{}", spec.benchmark, spec.rule, spec.seed);
    let csv_path = spec.output_dir.join(format!("{stem}.csv"));
    let svg_path = spec.output_dir.join(format!("{stem}.svg"));
    write_file(&csv_path, &trace_csv(&trace))?;
    let title = format!("{} ({}, seed {})", inst.problem.name(), spec.rule, spec.seed);
    write_file(
        &svg_path,
        &convergence_svg(&title, &[(spec.rule.as_str(), &trace.residual_norms)]),
    )?;

    let order = match estimate_tail_order(&trace.residual_norms, RATE_FLOOR, TAIL_PAIRS) {
        Ok(e) => format!("{:.4}", e.order),
        Err(_) => "n/a".to_string(),
    };
    let _ = writeln!(out, "benchmark:      {}", inst.problem.name());
    let _ = writeln!(out, "rule:           {}", spec.rule);
    let _ = writeln!(out, "status:         {}", trace.status);
    let _ = writeln!(out, "iterations:     {}", trace.iterations());
    let _ = writeln!(out, "final residual: {:e}", trace.final_residual());
    let _ = writeln!(out, "fitted order:   {order}");
    let _ = writeln!(out, "wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(exit_code(trace.status))
}

/// Runs both step rules from the same start and writes
/// `<benchmark>_compare_<seed>.{csv,svg}`. The exit code is the worse of
/// the two runs.
pub fn compare(spec: &RunSpec, out: &mut dyn Write) -> Result<i32, CommandError> {
    let inst = instantiate(spec.benchmark, spec.seed, spec.dims)?;
    let cfg = spec.config();
    let project = solve(&inst.problem, &inst.x0, StepRule::ProjectCurrent, &cfg)?;
    let polyak = solve(&inst.problem, &inst.x0, StepRule::PolyakTremba, &cfg)?;

    ensure_dir(&spec.output_dir)?;
    let stem = format!("{}_compare_{}", spec.benchmark, spec.seed);
    let csv_path = spec.output_dir.join(format!("{stem}.csv"));
    let svg_path = spec.output_dir.join(format!("{stem}.svg"));
    write_file(&csv_path, &compare_csv(&project.residual_norms, &polyak.residual_norms))?;
    let title = format!("{} (seed {})", inst.problem.name(), spec.seed);
    write_file(
        &svg_path,
        &convergence_svg(
            &title,
            &[
                ("project", &project.residual_norms),
                ("polyak", &polyak.residual_norms),
            ],
        ),
    )?;

    for (rule, t) in [("project", &project), ("polyak", &polyak)] {
        let _ = writeln!(
            out,
            "{rule:8} {} after {} steps, final residual {:e}",
            t.status,
            t.iterations(),
            t.final_residual()
        );
    }
    let _ = writeln!(out, "wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(exit_code(project.status).max(exit_code(polyak.status)))
}

pub fn verify(suite: Suite, out: &mut dyn Write) -> i32 {
    let checks = run_suite(suite);
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        let _ = writeln!(out, "{c}");
    }
    let _ = writeln!(out, "{} checks, {failed} failed", checks.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_USAGE
    }
}

pub fn list(out: &mut dyn Write) {
    for id in BenchmarkId::ALL {
        let dims = match id {
            BenchmarkId::Sigmoid => "m x n (--dims <m>x<n>)".to_string(),
            BenchmarkId::LcpToy => "3n x 2n (--dims <n>)".to_string(),
            _ => {
                let (m, n) = id.fixed_dims().expect("fixed size");
                format!("m={m} n={n}")
            }
        };
        let _ = writeln!(out, "{:8} {dims}", id.as_str());
    }
}

//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p undernewton-cli --test acceptance`.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use undernewton::linalg::{materialize_pinv, project_affine, DEFAULT_PIVOT_TOL};
use undernewton::problems::{instantiate, Dims};
use undernewton::solver::solve;
use undernewton::{BenchmarkId, Matrix, Rng64, SolveConfig, StepRule};
use undernewton_cli::commands::{compare, RunSpec, EXIT_OK};
use undernewton_cli::verify::{self, Check};

struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn from_checks(checks: &[Check]) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            lines: checks.iter().map(|c| c.to_string()).collect(),
        }
    }

    fn with(mut self, passed: bool, line: String) -> Self {
        self.passed &= passed;
        self.lines.push(format!("[{}] {line}", if passed { "PASS" } else { "FAIL" }));
        self
    }

    fn timed(self, elapsed: Duration, budget: Duration) -> Self {
        self.with(
            elapsed < budget,
            format!("runtime {:.2}s (budget {:.0}s)", elapsed.as_secs_f64(), budget.as_secs_f64()),
        )
    }
}

fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

fn random_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> Matrix {
    Matrix::new(rows, cols, rng.normal_vec(rows * cols)).unwrap()
}

/// Cholesky pseudo-inverse against nalgebra's SVD pseudo-inverse.
fn svd_cross_check(count: usize, seed: u64) -> (bool, String) {
    let mut rng = Rng64::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let n = 1 + (rng.next_u64() % 6) as usize;
        let m = n + 1 + (rng.next_u64() % (10 - n) as u64) as usize;
        let a = random_matrix(&mut rng, n, m);
        let ours = to_na(&materialize_pinv(&a, DEFAULT_PIVOT_TOL).unwrap());
        let svd = to_na(&a).pseudo_inverse(1e-14).unwrap();
        worst = worst.max((&ours - &svd).norm() / svd.norm());
    }
    (
        worst <= 1e-10,
        format!("pinv vs SVD pseudo-inverse: {count} matrices, max rel error {worst:.2e} (tol 1e-10)"),
    )
}

/// Affine projection against a KKT saddle system solved by nalgebra's LU.
fn lu_kkt_cross_check(count: usize, seed: u64) -> (bool, String) {
    let mut rng = Rng64::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let n = 1 + (rng.next_u64() % 5) as usize;
        let m = n + 1 + (rng.next_u64() % (8 - n) as u64) as usize;
        let h = random_matrix(&mut rng, n, m);
        let b = rng.normal_vec(n);
        let x = rng.normal_vec(m);
        let y = project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL).unwrap();

        let hn = to_na(&h);
        let mut k = DMatrix::<f64>::zeros(m + n, m + n);
        k.view_mut((0, 0), (m, m)).fill_with_identity();
        k.view_mut((m, 0), (n, m)).copy_from(&hn);
        k.view_mut((0, m), (m, n)).copy_from(&hn.transpose());
        let rhs = nalgebra::DVector::from_iterator(m + n, x.iter().chain(&b).copied());
        let sol = k.lu().solve(&rhs).expect("KKT system is nonsingular");
        let oracle = sol.rows(0, m);
        let diff = oracle.iter().zip(y.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        worst = worst.max(diff / oracle.norm());
    }
    (
        worst <= 1e-8,
        format!("projection vs nalgebra LU KKT solve: {count} instances, max rel error {worst:.2e} (tol 1e-8)"),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let check = verify::moore_penrose(500, 0x4D50);
    let elapsed = start.elapsed();
    let (ok, line) = svd_cross_check(500, 0x5644);
    Outcome::from_checks(&[check]).with(ok, line).timed(elapsed, Duration::from_secs(5))
}

fn criterion_2() -> Outcome {
    let (ok, line) = lu_kkt_cross_check(200, 0x4C55);
    Outcome::from_checks(&[
        verify::projection_oracle(200, 0x4B4B),
        verify::step_matches_projection(50, 0x5354),
    ])
    .with(ok, line)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let checks = verify::smooth_superlinear();
    let elapsed = start.elapsed();
    Outcome::from_checks(&checks).timed(elapsed, Duration::from_secs(10))
}

fn criterion_4() -> Outcome {
    Outcome::from_checks(&[verify::degenerate_p2()])
}

fn criterion_5() -> Outcome {
    // failures are allowed, but only as a reported status
    let cfg = SolveConfig {
        residual_tol: 1e-10,
        max_iter: 25,
        ..SolveConfig::default()
    };
    let mut reported = true;
    for n in [10, 50] {
        for seed in 1..=5 {
            let inst = instantiate(BenchmarkId::LcpToy, seed, Some(Dims::Lcp { n })).unwrap();
            reported &= solve(&inst.problem, &inst.x0, StepRule::ProjectCurrent, &cfg).is_ok();
        }
    }
    Outcome::from_checks(&[verify::complementarity()])
        .with(reported, format!("every lcp run returned a status: {reported}"))
}

fn criterion_6() -> Outcome {
    Outcome::from_checks(&[verify::rule_comparison()])
}

fn criterion_7() -> Outcome {
    Outcome::from_checks(&verify::nd_scans())
}

fn criterion_8() -> Outcome {
    Outcome::from_checks(&[verify::order_calibration()])
}

fn compare_once(spec: &RunSpec) -> (i32, Vec<u8>) {
    let code = compare(spec, &mut Vec::new()).expect("compare runs");
    let name = format!("{}_compare_{}.csv", spec.benchmark, spec.seed);
    (code, fs::read(spec.output_dir.join(name)).expect("csv written"))
}

fn criterion_9() -> Outcome {
    let mut outcome = Outcome {
        passed: true,
        lines: Vec::new(),
    };
    let cases = [
        (BenchmarkId::Sigmoid, 7, Some(Dims::Sigmoid { m: 20, n: 10 })),
        (BenchmarkId::LcpToy, 3, Some(Dims::Lcp { n: 10 })),
        (BenchmarkId::P2, 1, None),
    ];
    for (benchmark, seed, dims) in cases {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let runs: Vec<(i32, Vec<u8>)> = dirs
            .iter()
            .map(|d| {
                compare_once(&RunSpec {
                    benchmark,
                    rule: StepRule::ProjectCurrent,
                    seed,
                    dims,
                    max_iter: None,
                    residual_tol: None,
                    output_dir: d.path().to_path_buf(),
                })
            })
            .collect();
        let same = runs[0] == runs[1] && !runs[0].1.is_empty();
        outcome = outcome.with(
            same,
            format!(
                "compare {benchmark} seed {seed}: two runs byte-identical ({} bytes, exit {})",
                runs[0].1.len(),
                runs[0].0
            ),
        );
        match benchmark {
            BenchmarkId::Sigmoid => {
                outcome = outcome.with(runs[0].0 == EXIT_OK, format!("compare {benchmark} exits 0"));
            }
            BenchmarkId::P2 => {
                outcome = outcome.with(runs[0].0 != EXIT_OK, format!("compare {benchmark} exits non-zero"));
            }
            _ => {}
        }
    }
    outcome
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("moore-penrose identities", criterion_1),
        ("projection oracle", criterion_2),
        ("smooth superlinear convergence", criterion_3),
        ("degenerate p2", criterion_4),
        ("complementarity toy", criterion_5),
        ("step rule comparison", criterion_6),
        ("newton-differentiability scans", criterion_7),
        ("order estimator calibration", criterion_8),
        ("determinism of compare output", criterion_9),
    ];
    let mut failed = 0;
    let mut summary = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        println!("criterion {} ({name}):", i + 1);
        for line in &outcome.lines {
            println!("    {line}");
        }
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        summary.push(format!("[{tag}] criterion {}: {name}", i + 1));
        failed += usize::from(!outcome.passed);
    }
    println!();
    for line in &summary {
        println!("{line}");
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

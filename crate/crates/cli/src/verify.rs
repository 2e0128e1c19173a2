//! Verification suites behind `undernewton verify`.
//!
//! Each check is a self-contained run with fixed seeds and returns a
//! [`Check`] carrying a pass/fail flag and a one-line summary.

use std::fmt;
use std::str::FromStr;

use undernewton::diagnostics::{estimate_order, estimate_tail_order, nd_residual, nd_scan, DEFAULT_DIRECTIONS};
use undernewton::linalg::{apply_pinv, materialize_pinv, norm, project_affine, DEFAULT_PIVOT_TOL};
use undernewton::model::fd_jacobian;
use undernewton::problems::{instantiate, p1_distance, Dims};
use undernewton::solver::{distance_series, newton_step, solve};
use undernewton::{BenchmarkId, Error, Matrix, Problem, Rng64, SolveConfig, SolveStatus, StepRule, Vector};

/// Floor below which residuals are treated as roundoff in rate fits.
pub const RATE_FLOOR: f64 = 1e-13;
/// Consecutive pairs (three iterates) used for the tail order fit.
pub const TAIL_PAIRS: usize = 2;
pub const SUPERLINEAR_ORDER: f64 = 1.8;
pub const SMOOTH_BENCH_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Linalg,
    Nd,
    Rates,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "linalg" => Ok(Suite::Linalg),
            "nd" => Ok(Suite::Nd),
            "rates" => Ok(Suite::Rates),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidArgument(format!(
                "unknown suite `{s}` (expected linalg, nd, rates or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Linalg => linalg_suite(),
        Suite::Nd => nd_suite(),
        Suite::Rates => rates_suite(),
        Suite::All => {
            let (a, b, c) = std::thread::scope(|s| {
                let a = s.spawn(linalg_suite);
                let b = s.spawn(nd_suite);
                let c = s.spawn(rates_suite);
                (a.join().unwrap(), b.join().unwrap(), c.join().unwrap())
            });
            [a, b, c].concat()
        }
    }
}

pub fn linalg_suite() -> Vec<Check> {
    vec![
        moore_penrose(500, 0x4D50),
        projection_oracle(200, 0x4B4B),
        projection_properties(200, 0x5052),
        step_matches_projection(50, 0x5354),
    ]
}

pub fn nd_suite() -> Vec<Check> {
    let mut checks = jacobian_consistency(200, 0xFD);
    checks.push(affine_quotient());
    checks.extend(nd_scans());
    checks
}

pub fn rates_suite() -> Vec<Check> {
    let mut checks = vec![order_calibration()];
    checks.extend(smooth_superlinear());
    checks.push(degenerate_p2());
    checks.push(complementarity());
    checks.push(rule_comparison());
    checks
}

fn gaussian_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> Matrix {
    Matrix::new(rows, cols, rng.normal_vec(rows * cols)).expect("finite normals")
}

fn uniform_point(rng: &mut Rng64, m: usize, half_width: f64) -> Vec<f64> {
    (0..m).map(|_| half_width * (2.0 * rng.uniform() - 1.0)).collect()
}

/// Draws `(n, m)` with `n` in `n_range` and `m` in `n+1..=m_max`.
fn draw_shape(rng: &mut Rng64, n_max: usize, m_max: usize) -> (usize, usize) {
    let n = 1 + (rng.next_u64() % n_max as u64) as usize;
    let m = n + 1 + (rng.next_u64() % (m_max - n) as u64) as usize;
    (n, m)
}

/// `AA⁺A = A`, `A⁺AA⁺ = A⁺` (relative, Frobenius) and `AA⁺ = I` on seeded
/// full-row-rank Gaussian matrices, `n ∈ 1..=6`, `m ∈ n+1..=10`.
pub fn moore_penrose(count: usize, seed: u64) -> Check {
    let mut rng = Rng64::new(seed);
    let mut worst = [0.0_f64; 3];
    for _ in 0..count {
        let (n, m) = draw_shape(&mut rng, 6, 10);
        let a = gaussian_matrix(&mut rng, n, m);
        let pinv = match materialize_pinv(&a, DEFAULT_PIVOT_TOL) {
            Ok(p) => p,
            Err(e) => return Check::new("moore-penrose identities", false, format!("{n}x{m}: {e}")),
        };
        let a_pinv = a.matmul(&pinv);
        let e1 = a_pinv.matmul(&a).sub(&a).frobenius_norm() / a.frobenius_norm();
        let e2 = pinv.matmul(&a).matmul(&pinv).sub(&pinv).frobenius_norm() / pinv.frobenius_norm();
        let e3 = a_pinv.sub(&Matrix::identity(n)).frobenius_norm();
        for (w, e) in worst.iter_mut().zip([e1, e2, e3]) {
            *w = w.max(e);
        }
    }
    let passed = worst.iter().all(|w| *w <= 1e-10);
    Check::new(
        "moore-penrose identities",
        passed,
        format!(
            "{count} matrices; max rel ‖AA⁺A-A‖ {:.2e}, ‖A⁺AA⁺-A⁺‖ {:.2e}, ‖AA⁺-I‖ {:.2e} (tol 1e-10)",
            worst[0], worst[1], worst[2]
        ),
    )
}

/// Solves the square system `a·x = rhs` by Gaussian elimination with
/// partial pivoting. Independent of the Cholesky path used by the solver.
pub fn dense_lu_solve(a: &Matrix, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    Some(x)
}

/// Projection of `x` onto `{y : Hy = b}` from the saddle system
/// `[[I, Hᵀ], [H, 0]]·(y, λ) = (x, b)`.
pub fn kkt_projection(x: &[f64], h: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let (n, m) = h.shape();
    let size = m + n;
    let mut k = Matrix::zeros(size, size);
    for i in 0..m {
        k.set(i, i, 1.0);
    }
    for i in 0..n {
        for j in 0..m {
            k.set(m + i, j, h.get(i, j));
            k.set(j, m + i, h.get(i, j));
        }
    }
    let rhs: Vec<f64> = x.iter().chain(b).copied().collect();
    let sol = dense_lu_solve(&k, &rhs)?;
    Some(sol[..m].to_vec())
}

/// `project_affine` against the saddle-point oracle, relative error 1e-8,
/// `n ∈ 1..=5`, `m ∈ n+1..=8`.
pub fn projection_oracle(count: usize, seed: u64) -> Check {
    let name = "projection vs KKT oracle";
    let mut rng = Rng64::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let (n, m) = draw_shape(&mut rng, 5, 8);
        let h = gaussian_matrix(&mut rng, n, m);
        let b = rng.normal_vec(n);
        let x = rng.normal_vec(m);
        let y = match project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL) {
            Ok(y) => y,
            Err(e) => return Check::new(name, false, format!("{n}x{m}: {e}")),
        };
        let Some(oracle) = kkt_projection(&x, &h, &b) else {
            return Check::new(name, false, format!("{n}x{m}: oracle system singular"));
        };
        let oracle = Vector::from(oracle);
        let rel = y.sub(&oracle).norm() / oracle.norm().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
    }
    Check::new(
        name,
        worst <= 1e-8,
        format!("{count} instances; max relative error {worst:.2e} (tol 1e-8)"),
    )
}

/// Feasibility, idempotence and `HH⁺(x - P(x)) = x - P(x)` for the affine projection.
pub fn projection_properties(count: usize, seed: u64) -> Check {
    let name = "projection feasibility/idempotence/kernel";
    let mut rng = Rng64::new(seed);
    let mut worst = [0.0_f64; 3];
    for _ in 0..count {
        let (n, m) = draw_shape(&mut rng, 5, 8);
        let h = gaussian_matrix(&mut rng, n, m);
        let b = rng.normal_vec(n);
        let x = Vector::from(rng.normal_vec(m));
        let run = || -> Result<[f64; 3], Error> {
            let y = project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL)?;
            let feas = h.mul_vec(&y).sub(&b).norm() / (1.0 + norm(&b));
            let yy = project_affine(&y, &h, &b, DEFAULT_PIVOT_TOL)?;
            let idem = yy.sub(&y).norm();
            let d = x.sub(&y);
            let back = apply_pinv(&h, &h.mul_vec(&d), DEFAULT_PIVOT_TOL)?;
            let kernel = back.sub(&d).norm() / (1.0 + x.norm());
            Ok([feas / 1e-10, idem / 1e-10, kernel / 1e-9])
        };
        match run() {
            Ok(r) => {
                for (w, v) in worst.iter_mut().zip(r) {
                    *w = w.max(v);
                }
            }
            Err(e) => return Check::new(name, false, format!("{n}x{m}: {e}")),
        }
    }
    let passed = worst.iter().all(|w| *w <= 1.0);
    Check::new(
        name,
        passed,
        format!(
            "{count} instances; worst / tolerance: feasibility {:.2e}, idempotence {:.2e}, kernel {:.2e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

/// Every benchmark at a representative size.
pub fn all_instances(seed: u64) -> Vec<(BenchmarkId, Problem, Vector)> {
    BenchmarkId::ALL
        .into_iter()
        .map(|id| {
            let dims = match id {
                BenchmarkId::Sigmoid => Some(Dims::Sigmoid { m: 20, n: 10 }),
                BenchmarkId::LcpToy => Some(Dims::Lcp { n: 5 }),
                _ => None,
            };
            let inst = instantiate(id, seed, dims).expect("benchmark construction");
            (id, inst.problem, inst.x0)
        })
        .collect()
}

/// `newton_step(ProjectCurrent)` against `project_affine(x, H, Hx - G(x))`
/// at seeded points of `[-2, 2]^m`.
pub fn step_matches_projection(points: usize, seed: u64) -> Check {
    let name = "project step vs affine projection";
    let mut rng = Rng64::new(seed);
    let mut worst = 0.0_f64;
    let mut compared = 0;
    for (id, p, _) in all_instances(1) {
        for _ in 0..points {
            let x = uniform_point(&mut rng, p.m(), 2.0);
            let h = p.differential(&x);
            let b = h.mul_vec(&x).sub(&p.residual(&x));
            let via_step = newton_step(&p, &x, StepRule::ProjectCurrent, DEFAULT_PIVOT_TOL);
            let via_proj = project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL);
            match (via_step, via_proj) {
                (Ok(a), Ok(b)) => {
                    worst = worst.max(a.sub(&b).norm() / (1.0 + norm(&x)));
                    compared += 1;
                }
                (Err(Error::RankDeficient(_)), Err(Error::RankDeficient(_))) => {}
                (a, b) => {
                    return Check::new(name, false, format!("{id}: step {a:?} vs projection {b:?}"));
                }
            }
        }
    }
    Check::new(
        name,
        worst <= 1e-10,
        format!("{compared} points over {} benchmarks; max ‖Δ‖/(1+‖x‖) {worst:.2e} (tol 1e-10)", BenchmarkId::ALL.len()),
    )
}

/// Analytic (or Clarke-selection) differentials against central differences.
pub fn jacobian_consistency(points: usize, seed: u64) -> Vec<Check> {
    let mut rng = Rng64::new(seed);
    all_instances(1)
        .into_iter()
        .map(|(id, p, _)| {
            let name = format!("differential vs finite differences ({id})");
            let mut worst = 0.0_f64;
            let mut used = 0;
            while used < points {
                let x = uniform_point(&mut rng, p.m(), 2.0);
                if id == BenchmarkId::LcpToy && near_min_tie(&p, &x, 1e-7) {
                    continue;
                }
                let fd = match fd_jacobian(|v: &[f64]| p.residual(v), &x, p.n()) {
                    Ok(fd) => fd,
                    Err(e) => return Check::new(name, false, e.to_string()),
                };
                let h = p.differential(&x);
                worst = worst.max(h.sub(&fd).frobenius_norm() / (1.0 + fd.frobenius_norm()));
                used += 1;
            }
            Check::new(
                name,
                worst <= 1e-5,
                format!("{points} points; max ‖H-FD‖/(1+‖FD‖) {worst:.2e} (tol 1e-5)"),
            )
        })
        .collect()
}

/// True when some `min(1 - x_i, y_i)` of the complementarity toy is
/// within `margin` of a tie, or a finite-difference probe could cross it.
fn near_min_tie(p: &Problem, v: &[f64], margin: f64) -> bool {
    let n = p.n() / 2;
    let sqrt_eps = f64::EPSILON.sqrt();
    (0..n).any(|i| {
        let (x, y) = (v[i], v[n + i]);
        let probe = 2.0 * sqrt_eps * (1.0 + x.abs().max(y.abs()));
        ((1.0 - x) - y).abs() <= margin.max(probe)
    })
}

pub fn affine_quotient() -> Check {
    let h = Matrix::from_rows(&[vec![1.0, -2.0, 0.5, 3.0], vec![0.0, 1.0, 4.0, -1.0]]).expect("rows");
    let b = vec![0.3, -0.7];
    let hr = h.clone();
    let p = Problem::new(
        "affine",
        4,
        2,
        move |x: &[f64]| hr.mul_vec(x).sub(&b),
        move |_: &[f64]| h.clone(),
    )
    .expect("affine problem");
    let mut rng = Rng64::new(0xAF);
    let worst = (0..100)
        .map(|_| {
            let x = uniform_point(&mut rng, 4, 3.0);
            let y = uniform_point(&mut rng, 4, 3.0);
            nd_residual(&p, &x, &y).unwrap_or(f64::INFINITY)
        })
        .fold(0.0_f64, f64::max);
    Check::new(
        "affine Newton quotient",
        worst <= 1e-12,
        format!("100 pairs; max quotient {worst:.2e} (tol 1e-12)"),
    )
}

/// A certified zero for each smooth benchmark: analytic where known,
/// otherwise the end point of a converged solve from the default start.
pub fn certified_zero(p: &Problem, x0: &[f64]) -> Option<Vector> {
    if let Some(z) = p.known_zero() {
        return Some(z.clone());
    }
    let trace = solve(p, x0, StepRule::ProjectCurrent, &SolveConfig::default()).ok()?;
    (trace.status == SolveStatus::ResidualConverged).then(|| trace.final_iterate().clone())
}

pub const ND_RADII: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
pub const ND_TOL: f64 = 1e-4;

/// Worst Newton quotient over 64 seeded directions at radii `1e-1 … 1e-6`
/// around a zero: at `1e-6` it must be ≤ 1e-4 and ≤ its value at `1e-1`.
pub fn nd_scans() -> Vec<Check> {
    all_instances(1)
        .into_iter()
        .filter(|(id, _, _)| id.is_smooth())
        .map(|(id, p, x0)| {
            let name = format!("Newton-differentiability scan ({id})");
            let Some(z) = certified_zero(&p, &x0) else {
                return Check::new(name, false, "no certified zero");
            };
            match nd_scan(&p, &z, DEFAULT_DIRECTIONS, &ND_RADII) {
                Ok(scan) => {
                    let (first, last) = (scan.first(), scan.last());
                    Check::new(
                        name,
                        last <= ND_TOL && last <= first,
                        format!(
                            "worst ratio {first:.3e} at r=1e-1, {last:.3e} at r=1e-6 (tol {ND_TOL:e})"
                        ),
                    )
                }
                Err(e) => Check::new(name, false, e.to_string()),
            }
        })
        .collect()
}

/// Orders 1, 1.5 and 2 recovered from exact synthetic sequences.
pub fn order_calibration() -> Check {
    let mut details = Vec::new();
    let mut passed = true;
    for q in [1.0, 1.5, 2.0] {
        // s_{k+1} = 0.5 · s_k^q from s_0 = 0.5, kept above 1e-280
        let mut s = vec![0.5_f64];
        while s.len() < 40 {
            let next = 0.5 * s.last().unwrap().powf(q);
            if next < 1e-280 {
                break;
            }
            s.push(next);
        }
        match estimate_order(&s, 0.0) {
            Ok(est) => {
                passed &= (est.order - q).abs() <= 0.05;
                details.push(format!("q={q}: {:.4}", est.order));
            }
            Err(e) => {
                passed = false;
                details.push(format!("q={q}: {e}"));
            }
        }
    }
    Check::new("order estimator calibration", passed, format!("{} (tol ±0.05)", details.join(", ")))
}

/// Converges to `1e-12` within 15 steps with a tail order of at least 1.8.
pub fn superlinear_run(label: &str, p: &Problem, x0: &[f64]) -> (Check, undernewton::SolveTrace) {
    let cfg = SolveConfig {
        max_iter: 15,
        ..SolveConfig::default()
    };
    let trace = solve(p, x0, StepRule::ProjectCurrent, &cfg).expect("valid inputs");
    let order = estimate_tail_order(&trace.residual_norms, RATE_FLOOR, TAIL_PAIRS);
    let converged = trace.status == SolveStatus::ResidualConverged && trace.final_residual() <= 1e-12;
    let order_ok = order.as_ref().is_ok_and(|e| e.order >= SUPERLINEAR_ORDER);
    let order_txt = match &order {
        Ok(e) => format!("{:.3}", e.order),
        Err(e) => e.to_string(),
    };
    let check = Check::new(
        format!("superlinear convergence ({label})"),
        converged && order_ok,
        format!(
            "{} after {} steps, final residual {:.2e}, tail order {order_txt} (need ≤1e-12 within 15, order ≥ {SUPERLINEAR_ORDER})",
            trace.status,
            trace.iterations(),
            trace.final_residual()
        ),
    );
    (check, trace)
}

pub fn smooth_superlinear() -> Vec<Check> {
    let mut checks = Vec::new();
    let p1 = undernewton::problems::p1().expect("p1");
    let (mut check, trace) = superlinear_run("p1 from (3,4)", &p1, &[3.0, 4.0]);
    let dist = p1_distance(trace.final_iterate());
    let usable: Vec<f64> = distance_series(&trace, p1_distance)
        .into_iter()
        .filter(|d| *d > RATE_FLOOR)
        .collect();
    let ratios: Vec<f64> = usable.windows(2).map(|w| w[1] / w[0]).collect();
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let decreasing = tail.len() == 3 && tail.windows(2).all(|w| w[1] < w[0]);
    check.passed &= dist <= 1e-8 && decreasing;
    check.detail.push_str(&format!(
        "; dist to zero set {dist:.2e}, last ratios {}",
        tail.iter().map(|c| format!("{c:.2e}")).collect::<Vec<_>>().join(" > ")
    ));
    checks.push(check);

    for id in [BenchmarkId::P3, BenchmarkId::P3b, BenchmarkId::P4b] {
        for seed in SMOOTH_BENCH_SEEDS {
            let inst = instantiate(id, seed, None).expect("benchmark");
            checks.push(superlinear_run(&format!("{id} seed {seed}"), &inst.problem, &inst.x0).0);
        }
    }
    for seed in SMOOTH_BENCH_SEEDS {
        let inst = instantiate(BenchmarkId::Sigmoid, seed, Some(Dims::Sigmoid { m: 20, n: 10 })).expect("sigmoid");
        checks.push(superlinear_run(&format!("sigmoid 20x10 seed {seed}"), &inst.problem, &inst.x0).0);
    }
    checks
}

/// The rank-degenerate system: non-increasing residuals for ten steps, no
/// superlinear tail, and a non-converged status at `1e-12`.
pub fn degenerate_p2() -> Check {
    let p = undernewton::problems::p2().expect("p2");
    let trace = solve(&p, &[1.0, 1.0, 1.0], StepRule::ProjectCurrent, &SolveConfig::default()).expect("valid");
    let r = &trace.residual_norms;
    let monotone = r.len() > 10 && r[..=10].windows(2).all(|w| w[1] <= w[0]);
    let status_ok = matches!(trace.status, SolveStatus::MaxIterations | SolveStatus::RankDeficientAbort);
    let order = estimate_tail_order(r, RATE_FLOOR, TAIL_PAIRS).map(|e| e.order);
    let full = estimate_order(r, RATE_FLOOR).map(|e| e.order);
    let slow = order.as_ref().map_or(true, |q| *q < SUPERLINEAR_ORDER)
        && full.as_ref().map_or(true, |q| *q < SUPERLINEAR_ORDER);
    Check::new(
        "degenerate p2",
        monotone && status_ok && slow,
        format!(
            "{} after {} steps, final residual {:.2e}, tail order {:.3}, full order {:.3}, first 10 non-increasing: {monotone}",
            trace.status,
            trace.iterations(),
            trace.final_residual(),
            order.unwrap_or(f64::NAN),
            full.unwrap_or(f64::NAN),
        ),
    )
}

/// `n ∈ {10, 50}`, five seeds each: at least 80% reach `1e-10` within 25 steps.
pub fn complementarity() -> Check {
    let cfg = SolveConfig {
        residual_tol: 1e-10,
        max_iter: 25,
        ..SolveConfig::default()
    };
    let mut passed = true;
    let mut details = Vec::new();
    for n in [10, 50] {
        let mut ok = 0;
        for seed in 1..=5 {
            let inst = instantiate(BenchmarkId::LcpToy, seed, Some(Dims::Lcp { n })).expect("lcp");
            match solve(&inst.problem, &inst.x0, StepRule::ProjectCurrent, &cfg) {
                Ok(t) if t.status == SolveStatus::ResidualConverged && t.final_residual() <= 1e-10 => ok += 1,
                Ok(_) => {}
                Err(_) => passed = false,
            }
        }
        passed &= ok as f64 / 5.0 >= 0.8;
        details.push(format!("n={n}: {ok}/5"));
    }
    Check::new(
        "complementarity toy",
        passed,
        format!("{} reached 1e-10 within 25 steps (need ≥80%)", details.join(", ")),
    )
}

/// Both step rules reach `1e-10` within 8 steps on seeded sigmoid systems.
pub fn rule_comparison() -> Check {
    let cfg = SolveConfig {
        residual_tol: 1e-10,
        max_iter: 8,
        ..SolveConfig::default()
    };
    let mut passed = true;
    let mut details = Vec::new();
    for seed in SMOOTH_BENCH_SEEDS {
        let inst = instantiate(BenchmarkId::Sigmoid, seed, Some(Dims::Sigmoid { m: 20, n: 10 })).expect("sigmoid");
        let mut its = Vec::new();
        for rule in [StepRule::ProjectCurrent, StepRule::PolyakTremba] {
            let t = solve(&inst.problem, &inst.x0, rule, &cfg).expect("valid");
            passed &= t.status == SolveStatus::ResidualConverged;
            its.push(format!("{rule}={}", t.iterations()));
        }
        details.push(format!("seed {seed}: {}", its.join("/")));
    }
    Check::new(
        "step rule comparison",
        passed,
        format!("{} (need ≤1e-10 within 8)", details.join(", ")),
    )
}

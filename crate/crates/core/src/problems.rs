//! Benchmark corpus with deterministic, seeded instance generation.
//!
//! * `Sigmoid` -- `G(x)_i = φ((Cx)_i - b_i) - y_i`, `φ(t) = t / (1 + e^{-|t|})`,
//!   with `y` generated from a random point so the zero set is nonempty.
//! * `P1`..`P4b` -- small polynomial systems (circles, inverse kinematics,
//!   aircraft stability) with hand-derived Jacobians.
//! * `LcpToy` -- `G(x, y, z) = [Ax + b - y + z; min(1 - x, y)]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::model::{min_residual_and_differential, smooth_problem, BranchRule, Problem};

/// splitmix64 generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng64 {
    state: u64,
    spare: Option<u64>,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`: the top 53 bits of `next_u64()` over `2^53`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller; the second value of each pair is
    /// returned by the following call.
    pub fn normal(&mut self) -> f64 {
        if let Some(bits) = self.spare.take() {
            return f64::from_bits(bits);
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * (1.0 - u1).ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some((radius * angle.sin()).to_bits());
        radius * angle.cos()
    }

    pub fn normal_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkId {
    Sigmoid,
    P1,
    P2,
    P3,
    P3b,
    P4,
    P4b,
    LcpToy,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 8] = [
        BenchmarkId::Sigmoid,
        BenchmarkId::P1,
        BenchmarkId::P2,
        BenchmarkId::P3,
        BenchmarkId::P3b,
        BenchmarkId::P4,
        BenchmarkId::P4b,
        BenchmarkId::LcpToy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkId::Sigmoid => "sigmoid",
            BenchmarkId::P1 => "p1",
            BenchmarkId::P2 => "p2",
            BenchmarkId::P3 => "p3",
            BenchmarkId::P3b => "p3b",
            BenchmarkId::P4 => "p4",
            BenchmarkId::P4b => "p4b",
            BenchmarkId::LcpToy => "lcp",
        }
    }

    /// `(m, n)` for fixed-size benchmarks, `None` for the sized ones.
    pub fn fixed_dims(self) -> Option<(usize, usize)> {
        match self {
            BenchmarkId::P1 => Some((2, 1)),
            BenchmarkId::P2 => Some((3, 2)),
            BenchmarkId::P3 => Some((8, 7)),
            BenchmarkId::P3b => Some((8, 6)),
            BenchmarkId::P4 => Some((8, 5)),
            BenchmarkId::P4b => Some((6, 5)),
            BenchmarkId::Sigmoid | BenchmarkId::LcpToy => None,
        }
    }

    /// Whether the residual is C¹ (every benchmark except the complementarity toy).
    pub fn is_smooth(self) -> bool {
        self != BenchmarkId::LcpToy
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "lcptoy" | "lcp-toy" | "lcp_toy" => return Ok(BenchmarkId::LcpToy),
            _ => {}
        }
        BenchmarkId::ALL
            .into_iter()
            .find(|id| id.as_str() == lower)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown benchmark `{s}`")))
    }
}

/// Size parameters for the benchmarks that take them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    /// `m` unknowns, `n` equations.
    Sigmoid { m: usize, n: usize },
    /// Block size `n`: `3n` unknowns, `2n` equations.
    Lcp { n: usize },
}

impl FromStr for Dims {
    type Err = Error;

    /// `"<m>x<n>"` or `"<n>"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse dims `{s}`"));
        match s.split_once(['x', 'X']) {
            Some((m, n)) => Ok(Dims::Sigmoid {
                m: m.trim().parse().map_err(|_| bad())?,
                n: n.trim().parse().map_err(|_| bad())?,
            }),
            None => Ok(Dims::Lcp {
                n: s.trim().parse().map_err(|_| bad())?,
            }),
        }
    }
}

/// A problem together with its starting point.
#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: Problem,
    pub x0: Vector,
}

/// Builds benchmark `id`. `dims` is required for `Sigmoid` and `LcpToy`
/// and rejected for the fixed-size problems.
pub fn instantiate(id: BenchmarkId, seed: u64, dims: Option<Dims>) -> Result<Instance> {
    let fixed = |problem: Result<Problem>| -> Result<Instance> {
        if let Some(d) = dims {
            return Err(Error::InvalidArgument(format!("benchmark {id} takes no dims, got {d:?}")));
        }
        Ok(Instance {
            problem: problem?,
            x0: fixed_start(id, seed),
        })
    };
    match id {
        BenchmarkId::Sigmoid => match dims {
            Some(Dims::Sigmoid { m, n }) => sigmoid_problem(m, n, seed),
            _ => Err(Error::InvalidArgument("sigmoid needs dims <m>x<n>".into())),
        },
        BenchmarkId::LcpToy => match dims {
            Some(Dims::Lcp { n }) => lcp_toy(n, seed),
            _ => Err(Error::InvalidArgument("lcp needs dims <n>".into())),
        },
        BenchmarkId::P1 => fixed(p1()),
        BenchmarkId::P2 => fixed(p2()),
        BenchmarkId::P3 => fixed(p3()),
        BenchmarkId::P3b => fixed(p3b()),
        BenchmarkId::P4 => fixed(p4()),
        BenchmarkId::P4b => fixed(p4b()),
    }
}

/// Deterministic starting point for benchmark `id`.
pub fn default_start(id: BenchmarkId, seed: u64, dims: Option<Dims>) -> Result<Vector> {
    match id {
        BenchmarkId::Sigmoid | BenchmarkId::LcpToy => Ok(instantiate(id, seed, dims)?.x0),
        _ => Ok(fixed_start(id, seed)),
    }
}

fn fixed_start(id: BenchmarkId, seed: u64) -> Vector {
    let mut rng = Rng64::new(seed);
    match id {
        BenchmarkId::P1 => vec![3.0, 4.0].into(),
        BenchmarkId::P2 => vec![1.0, 1.0, 1.0].into(),
        BenchmarkId::P3 | BenchmarkId::P3b => {
            let base = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
            let d = Vector::from(rng.normal_vec(8));
            let d = d.scale(0.3 / d.norm());
            d.add(&base)
        }
        BenchmarkId::P4 => Vector::from(rng.normal_vec(8)).scale(0.5),
        BenchmarkId::P4b => Vector::from(rng.normal_vec(6)).scale(0.5),
        BenchmarkId::Sigmoid | BenchmarkId::LcpToy => unreachable!("sized benchmark"),
    }
}

/// `φ(t) = t / (1 + e^{-|t|})`
pub fn phi(t: f64) -> f64 {
    t / (1.0 + (-t.abs()).exp())
}

/// `φ'(t) = (1 + e^{-|t|} + |t| e^{-|t|}) / (1 + e^{-|t|})²`, positive everywhere.
pub fn phi_prime(t: f64) -> f64 {
    let e = (-t.abs()).exp();
    (1.0 + e + t.abs() * e) / ((1.0 + e) * (1.0 + e))
}

/// Seeded sigmoid system. Draw order from `Rng64(seed)`: `C` (row-major),
/// `b`, the planted zero `x*`, then the start perturbation.
/// Returns `x0 = x* + 0.5·ξ`; `x*` is attached as the known zero.
pub fn sigmoid_problem(m: usize, n: usize, seed: u64) -> Result<Instance> {
    if n == 0 || n >= m {
        return Err(Error::InvalidArgument(format!(
            "sigmoid needs 0 < n < m, got {m}x{n}"
        )));
    }
    let mut rng = Rng64::new(seed);
    let c = Matrix::new(n, m, rng.normal_vec(n * m))?;
    let b = rng.normal_vec(n);
    let x_star = Vector::from(rng.normal_vec(m));
    let cx = c.mul_vec(&x_star);
    let y: Vec<f64> = (0..n).map(|i| phi(cx[i] - b[i])).collect();
    let x0 = x_star.add(&Vector::from(rng.normal_vec(m)).scale(0.5));

    let (cr, br, yr) = (c.clone(), b.clone(), y);
    let residual = move |x: &[f64]| -> Vector {
        let cx = cr.mul_vec(x);
        (0..n).map(|i| phi(cx[i] - br[i]) - yr[i]).collect::<Vec<_>>().into()
    };
    let jacobian = move |x: &[f64]| -> Matrix {
        let cx = c.mul_vec(x);
        let mut h = c.clone();
        for i in 0..n {
            let s = phi_prime(cx[i] - b[i]);
            h.row_mut(i).iter_mut().for_each(|v| *v *= s);
        }
        h
    };
    let name = format!("sigmoid-{m}x{n}-s{seed}");
    // x* is a zero up to the rounding of re-evaluating φ((Cx*)_i - b_i)
    let problem = smooth_problem(residual, jacobian, m, n, name, Some(x_star))?;
    Ok(Instance { problem, x0 })
}

fn sq(v: f64) -> f64 {
    v * v
}

/// `(x1² + x2² - 4)(x1² + x2² - 1)`; zero set is the circles of radius 1 and 2.
pub fn p1() -> Result<Problem> {
    smooth_problem(
        |x: &[f64]| {
            let r = sq(x[0]) + sq(x[1]);
            vec![(r - 4.0) * (r - 1.0)].into()
        },
        |x: &[f64]| {
            let r = sq(x[0]) + sq(x[1]);
            let s = 2.0 * (2.0 * r - 5.0);
            Matrix::new(1, 2, vec![s * x[0], s * x[1]]).expect("shape")
        },
        2,
        1,
        "p1",
        Some(vec![2.0, 0.0].into()),
    )
}

/// Distance to the zero set of [`p1`]: `min(|‖x‖ - 1|, |‖x‖ - 2|)`.
pub fn p1_distance(x: &[f64]) -> f64 {
    let r = crate::linalg::norm(x);
    (r - 1.0).abs().min((r - 2.0).abs())
}

/// `[x1² + x2² - x3; x1² + x2² - 1.1 x3]`; only zero is the origin, where
/// the Jacobian drops to rank 1.
pub fn p2() -> Result<Problem> {
    smooth_problem(
        |x: &[f64]| {
            let r = sq(x[0]) + sq(x[1]);
            vec![r - x[2], r - 1.1 * x[2]].into()
        },
        |x: &[f64]| {
            let (a, b) = (2.0 * x[0], 2.0 * x[1]);
            Matrix::new(2, 3, vec![a, b, -1.0, a, b, -1.1]).expect("shape")
        },
        3,
        2,
        "p2",
        Some(vec![0.0; 3].into()),
    )
}

fn p3_residual(x: &[f64], equations: usize) -> Vector {
    let g = [
        sq(x[0]) + sq(x[1]) - 1.0,
        sq(x[2]) + sq(x[3]) - 1.0,
        sq(x[4]) + sq(x[5]) - 1.0,
        sq(x[6]) + sq(x[7]) - 1.0,
        0.004731 * x[0] * x[1] - 0.3578 * x[1] * x[2] - 0.1238 * x[0] - 0.001637 * x[1]
            - 0.9338 * x[3]
            + x[6],
        0.2238 * x[0] * x[2] + 0.7623 * x[1] * x[2] + 0.2638 * x[0] - 0.07745 * x[1]
            - 0.6734 * x[3]
            - 0.6022,
        x[5] * x[7] + 0.3578 * x[0] + 0.004731 * x[1],
    ];
    g[..equations].to_vec().into()
}

fn p3_jacobian(x: &[f64], equations: usize) -> Matrix {
    let mut h = Matrix::zeros(7, 8);
    for k in 0..4 {
        h.set(k, 2 * k, 2.0 * x[2 * k]);
        h.set(k, 2 * k + 1, 2.0 * x[2 * k + 1]);
    }
    h.set(4, 0, 0.004731 * x[1] - 0.1238);
    h.set(4, 1, 0.004731 * x[0] - 0.3578 * x[2] - 0.001637);
    h.set(4, 2, -0.3578 * x[1]);
    h.set(4, 3, -0.9338);
    h.set(4, 6, 1.0);

    h.set(5, 0, 0.2238 * x[2] + 0.2638);
    h.set(5, 1, 0.7623 * x[2] - 0.07745);
    h.set(5, 2, 0.2238 * x[0] + 0.7623 * x[1]);
    h.set(5, 3, -0.6734);

    h.set(6, 0, 0.3578);
    h.set(6, 1, 0.004731);
    h.set(6, 5, x[7]);
    h.set(6, 7, x[5]);
    Matrix::new(equations, 8, h.as_slice()[..equations * 8].to_vec()).expect("shape")
}

/// Inverse-kinematics system, 7 equations in 8 unknowns.
pub fn p3() -> Result<Problem> {
    smooth_problem(|x: &[f64]| p3_residual(x, 7), |x: &[f64]| p3_jacobian(x, 7), 8, 7, "p3", None)
}

/// [`p3`] without its last equation.
pub fn p3b() -> Result<Problem> {
    smooth_problem(|x: &[f64]| p3_residual(x, 6), |x: &[f64]| p3_jacobian(x, 6), 8, 6, "p3b", None)
}

fn p4_residual(x: &[f64]) -> Vector {
    let [x1, x2, x3, x4, x5, x6, x7, x8] = [x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]];
    vec![
        -3.933 * x1 + 0.107 * x2 + 0.126 * x3 - 9.99 * x5 - 45.83 * x7 - 7.64 * x8
            - 0.727 * x2 * x3
            + 8.39 * x3 * x4
            - 684.4 * x4 * x5
            + 63.5 * x4 * x7,
        -0.987 * x2 - 22.95 * x4 - 28.37 * x6 + 0.949 * x1 * x3 + 0.173 * x1 * x5,
        0.002 * x1 - 0.235 * x3 + 5.67 * x5 + 0.921 * x7 - 6.51 * x8 - 0.716 * x1 * x2
            - 1.578 * x1 * x4
            + 1.132 * x4 * x7,
        x1 - x4 - 0.168 * x6 - x1 * x2,
        -x3 - 0.196 * x5 - 0.0071 * x7 + x1 * x4,
    ]
    .into()
}

fn p4_jacobian(x: &[f64]) -> Matrix {
    let [x1, x2, x3, x4, x5, _x6, x7, _x8] = [x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]];
    Matrix::from_rows(&[
        vec![
            -3.933,
            0.107 - 0.727 * x3,
            0.126 - 0.727 * x2 + 8.39 * x4,
            8.39 * x3 - 684.4 * x5 + 63.5 * x7,
            -9.99 - 684.4 * x4,
            0.0,
            -45.83 + 63.5 * x4,
            -7.64,
        ],
        vec![
            0.949 * x3 + 0.173 * x5,
            -0.987,
            0.949 * x1,
            -22.95,
            0.173 * x1,
            -28.37,
            0.0,
            0.0,
        ],
        vec![
            0.002 - 0.716 * x2 - 1.578 * x4,
            -0.716 * x1,
            -0.235,
            -1.578 * x1 + 1.132 * x7,
            5.67,
            0.0,
            0.921 + 1.132 * x4,
            -6.51,
        ],
        vec![1.0 - x2, -x1, 0.0, -1.0, 0.0, -0.168, 0.0, 0.0],
        vec![x4, 0.0, -1.0, x1, -0.196, 0.0, -0.0071, 0.0],
    ])
    .expect("shape")
}

/// Aircraft-stability system, 5 equations in 8 unknowns; the origin is a zero.
pub fn p4() -> Result<Problem> {
    smooth_problem(p4_residual, p4_jacobian, 8, 5, "p4", Some(vec![0.0; 8].into()))
}

const P4B_FREE: [usize; 6] = [0, 1, 2, 3, 4, 6];

fn p4b_embed(x: &[f64]) -> [f64; 8] {
    [x[0], x[1], x[2], x[3], x[4], 0.1, x[5], 0.0]
}

/// [`p4`] with `x6 = 0.1` and `x8 = 0` substituted; unknowns
/// `(x1, x2, x3, x4, x5, x7)`.
pub fn p4b() -> Result<Problem> {
    smooth_problem(
        |x: &[f64]| p4_residual(&p4b_embed(x)),
        |x: &[f64]| p4_jacobian(&p4b_embed(x)).select_columns(&P4B_FREE),
        6,
        5,
        "p4b",
        None,
    )
}

/// Complementarity toy for explicit `A` (n×n) and `b`. Unknowns are
/// `(x, y, z)` stacked into `R^{3n}`.
pub fn lcp_problem(a: Matrix, b: Vec<f64>, rule: BranchRule) -> Result<Problem> {
    let n = b.len();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "A is {:?}, b has length {n}",
            a.shape()
        )));
    }
    let (ja, jb) = lcp_min_blocks(n);
    let (ar, br) = (a.clone(), b.clone());
    let (jar, jbr) = (ja.clone(), jb.clone());
    let residual = move |v: &[f64]| -> Vector {
        let (x, y, z) = (&v[..n], &v[n..2 * n], &v[2 * n..]);
        let ax = ar.mul_vec(x);
        let mut g: Vec<f64> = (0..n).map(|i| ax[i] + br[i] - y[i] + z[i]).collect();
        let first: Vec<f64> = x.iter().map(|xi| 1.0 - xi).collect();
        let (mins, _) = min_residual_and_differential(&first, y, &jar, &jbr, rule).expect("shape");
        g.extend_from_slice(&mins);
        g.into()
    };
    let differential = move |v: &[f64]| -> Matrix {
        let (x, y) = (&v[..n], &v[n..2 * n]);
        let first: Vec<f64> = x.iter().map(|xi| 1.0 - xi).collect();
        let (_, jmin) = min_residual_and_differential(&first, y, &ja, &jb, rule).expect("shape");
        let mut h = Matrix::zeros(2 * n, 3 * n);
        for i in 0..n {
            let row = h.row_mut(i);
            row[..n].copy_from_slice(a.row(i));
            row[n + i] = -1.0;
            row[2 * n + i] = 1.0;
        }
        for i in 0..n {
            h.row_mut(n + i).copy_from_slice(jmin.row(i));
        }
        h
    };
    Problem::new(format!("lcp-{n}"), 3 * n, 2 * n, residual, differential)
}

/// `Ja = [-I, 0, 0]` and `Jb = [0, I, 0]`, the derivatives of `1 - x` and `y`.
fn lcp_min_blocks(n: usize) -> (Matrix, Matrix) {
    let mut ja = Matrix::zeros(n, 3 * n);
    let mut jb = Matrix::zeros(n, 3 * n);
    for i in 0..n {
        ja.set(i, i, -1.0);
        jb.set(i, n + i, 1.0);
    }
    (ja, jb)
}

/// Seeded complementarity toy. Draw order: `A` (row-major), `b`, `x0`.
pub fn lcp_toy(n: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("lcp needs n >= 1".into()));
    }
    let mut rng = Rng64::new(seed);
    let a = Matrix::new(n, n, rng.normal_vec(n * n))?;
    let b = rng.normal_vec(n);
    let x0 = rng.normal_vec(3 * n).into();
    Ok(Instance {
        problem: lcp_problem(a, b, BranchRule::default())?,
        x0,
    })
}

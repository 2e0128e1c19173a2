//! The under-determined Newton-type iteration.
//!
//! Each step picks `H = H(x)` and moves to a point of the affine set
//! `𝒜(x, H) = {y : G(x) + H(y - x) = 0}`:
//!
//! * [`StepRule::ProjectCurrent`] -- the projection of `x` onto `𝒜`, `x - H⁺G(x)`.
//! * [`StepRule::PolyakTremba`] -- the minimum-norm point of `𝒜`, `-H⁺(G(x) - Hx)`.
//!
//! There is no line search or damping.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{apply_pinv, Matrix, Vector, DEFAULT_PIVOT_TOL};
use crate::model::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepRule {
    ProjectCurrent,
    PolyakTremba,
}

impl StepRule {
    pub fn as_str(self) -> &'static str {
        match self {
            StepRule::ProjectCurrent => "project",
            StepRule::PolyakTremba => "polyak",
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StepRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "project" | "projectcurrent" => Ok(StepRule::ProjectCurrent),
            "polyak" | "polyaktremba" | "polyak-tremba" => Ok(StepRule::PolyakTremba),
            _ => Err(Error::InvalidArgument(format!("unknown step rule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Stop once `‖G(x)‖ <= residual_tol`.
    pub residual_tol: f64,
    /// Stop once `‖x+ - x‖ <= step_tol`.
    pub step_tol: f64,
    /// Maximum number of Newton steps.
    pub max_iter: usize,
    pub pivot_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-12,
            step_tol: 1e-14,
            max_iter: 50,
            pivot_tol: DEFAULT_PIVOT_TOL,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.residual_tol) || !positive(self.step_tol) || !positive(self.pivot_tol) {
            return Err(Error::InvalidArgument(format!("tolerances must be positive: {self:?}")));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    ResidualConverged,
    StepConverged,
    MaxIterations,
    RankDeficientAbort,
    /// A residual or iterate stopped being finite.
    NonFinite,
}

impl SolveStatus {
    pub fn converged(self) -> bool {
        matches!(self, SolveStatus::ResidualConverged | SolveStatus::StepConverged)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::ResidualConverged => "ResidualConverged",
            SolveStatus::StepConverged => "StepConverged",
            SolveStatus::MaxIterations => "MaxIterations",
            SolveStatus::RankDeficientAbort => "RankDeficientAbort",
            SolveStatus::NonFinite => "NonFinite",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The recorded sequence `x^0, x^1, ...` of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub iterates: Vec<Vector>,
    /// `‖G(x^k)‖`, one per iterate.
    pub residual_norms: Vec<f64>,
    /// `‖x^{k+1} - x^k‖`, one fewer than iterates.
    pub step_norms: Vec<f64>,
    pub status: SolveStatus,
    /// `‖x^k - x̄‖` when the problem carries a known zero `x̄`.
    pub dist_to_known_zero: Option<Vec<f64>>,
}

impl SolveTrace {
    /// Number of Newton steps taken.
    pub fn iterations(&self) -> usize {
        self.step_norms.len()
    }

    pub fn final_iterate(&self) -> &Vector {
        self.iterates.last().expect("trace holds x0")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_norms.last().expect("trace holds x0")
    }
}

/// Step from `x` given `g = G(x)` and `h = H(x)`.
fn step_from(x: &[f64], g: &[f64], h: &Matrix, rule: StepRule, pivot_tol: f64) -> Result<Vector> {
    match rule {
        StepRule::ProjectCurrent => {
            let dx = apply_pinv(h, g, pivot_tol)?;
            Ok(Vector::from(x.to_vec()).sub(&dx))
        }
        StepRule::PolyakTremba => {
            let rhs = h.mul_vec(x).sub(g);
            apply_pinv(h, &rhs, pivot_tol)
        }
    }
}

/// One Newton step from `x` under `rule`.
pub fn newton_step(p: &Problem, x: &[f64], rule: StepRule, pivot_tol: f64) -> Result<Vector> {
    if x.len() != p.m() {
        return Err(Error::ShapeMismatch(format!("x of length {} for m = {}", x.len(), p.m())));
    }
    let g = p.residual(x);
    let h = p.differential(x);
    step_from(x, &g, &h, rule, pivot_tol)
}

/// Runs the iteration from `x0` until a stopping condition. Failures are
/// reported through [`SolveTrace::status`], never as errors, except for
/// invalid inputs.
pub fn solve(p: &Problem, x0: &[f64], rule: StepRule, cfg: &SolveConfig) -> Result<SolveTrace> {
    cfg.validate()?;
    if x0.len() != p.m() {
        return Err(Error::ShapeMismatch(format!("x0 of length {} for m = {}", x0.len(), p.m())));
    }
    let mut x = Vector::from(x0.to_vec());
    let mut g = p.residual(&x);
    let mut trace = SolveTrace {
        iterates: vec![x.clone()],
        residual_norms: vec![g.norm()],
        step_norms: Vec::new(),
        status: SolveStatus::MaxIterations,
        dist_to_known_zero: None,
    };

    let status = loop {
        let r = *trace.residual_norms.last().unwrap();
        if !r.is_finite() || !x.is_finite() {
            break SolveStatus::NonFinite;
        }
        if r <= cfg.residual_tol {
            break SolveStatus::ResidualConverged;
        }
        if let Some(&s) = trace.step_norms.last() {
            if s <= cfg.step_tol {
                break SolveStatus::StepConverged;
            }
        }
        if trace.iterations() >= cfg.max_iter {
            break SolveStatus::MaxIterations;
        }
        let h = p.differential(&x);
        if !h.is_finite() {
            break SolveStatus::NonFinite;
        }
        let next = match step_from(&x, &g, &h, rule, cfg.pivot_tol) {
            Ok(v) => v,
            Err(Error::RankDeficient(_)) => break SolveStatus::RankDeficientAbort,
            Err(e) => return Err(e),
        };
        trace.step_norms.push(next.sub(&x).norm());
        x = next;
        g = p.residual(&x);
        trace.residual_norms.push(g.norm());
        trace.iterates.push(x.clone());
    };
    trace.status = status;
    if let Some(z) = p.known_zero() {
        trace.dist_to_known_zero = Some(trace.iterates.iter().map(|xk| xk.sub(z).norm()).collect());
    }
    Ok(trace)
}

/// `dist(x^k, 𝒵)` for every iterate, with `zero_distance` computing the
/// distance to the zero set.
pub fn distance_series<F>(trace: &SolveTrace, zero_distance: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    trace.iterates.iter().map(|x| zero_distance(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::project_affine;
    use crate::model::smooth_problem;
    use crate::problems::{p1, p1_distance, p2, sigmoid_problem};

    fn unit_circle() -> Problem {
        smooth_problem(
            |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 1.0].into(),
            |x: &[f64]| Matrix::new(1, 2, vec![2.0 * x[0], 2.0 * x[1]]).unwrap(),
            2,
            1,
            "unit-circle",
            None,
        )
        .unwrap()
    }

    #[test]
    fn project_step_on_circle() {
        let x = newton_step(&unit_circle(), &[2.0, 0.0], StepRule::ProjectCurrent, DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(x.as_slice(), &[1.25, 0.0]);
    }

    #[test]
    fn steps_at_a_zero() {
        let p = unit_circle();
        let z = [0.6, 0.8];
        let x = newton_step(&p, &z, StepRule::ProjectCurrent, DEFAULT_PIVOT_TOL).unwrap();
        assert!(x.sub(&z).norm() <= 1e-15);
        // PolyakTremba lands on the linearization's zero set through z
        let y = newton_step(&p, &z, StepRule::PolyakTremba, DEFAULT_PIVOT_TOL).unwrap();
        let h = p.differential(&z);
        let g = p.residual(&z);
        let lin = g.add(&h.mul_vec(&y.sub(&z)));
        assert!(lin.norm() <= 1e-15);
    }

    #[test]
    fn project_step_matches_affine_projection() {
        let inst = sigmoid_problem(12, 5, 3).unwrap();
        let p = &inst.problem;
        let x = &inst.x0;
        let h = p.differential(x);
        let b = h.mul_vec(x).sub(&p.residual(x));
        let via_proj = project_affine(x, &h, &b, DEFAULT_PIVOT_TOL).unwrap();
        let via_step = newton_step(p, x, StepRule::ProjectCurrent, DEFAULT_PIVOT_TOL).unwrap();
        assert!(via_proj.sub(&via_step).norm() <= 1e-10);
    }

    #[test]
    fn immediate_stop_at_zero() {
        let p = p1().unwrap();
        let trace = solve(&p, &[2.0, 0.0], StepRule::ProjectCurrent, &SolveConfig::default()).unwrap();
        assert_eq!(trace.status, SolveStatus::ResidualConverged);
        assert_eq!(trace.iterates.len(), 1);
        assert!(trace.step_norms.is_empty());
        assert_eq!(trace.dist_to_known_zero.as_deref(), Some(&[0.0][..]));
    }

    #[test]
    fn p1_converges_onto_a_circle() {
        let p = p1().unwrap();
        let cfg = SolveConfig {
            max_iter: 25,
            ..SolveConfig::default()
        };
        let trace = solve(&p, &[3.0, 4.0], StepRule::ProjectCurrent, &cfg).unwrap();
        assert_eq!(trace.status, SolveStatus::ResidualConverged);
        assert!(trace.final_residual() <= 1e-12);
        assert!(p1_distance(trace.final_iterate()) <= 1e-6);

        let d = distance_series(&trace, p1_distance);
        assert_eq!(d.len(), trace.iterates.len());
        let usable: Vec<f64> = d.iter().copied().filter(|v| *v > 1e-14).collect();
        assert!(usable.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        let ratios: Vec<f64> = usable.windows(2).map(|w| w[1] / w[0]).collect();
        let tail = &ratios[ratios.len() - 3..];
        assert!(tail.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }

    #[test]
    fn p2_has_no_fast_tail() {
        let p = p2().unwrap();
        let trace = solve(&p, &[1.0, 1.0, 1.0], StepRule::ProjectCurrent, &SolveConfig::default()).unwrap();
        assert!(
            matches!(trace.status, SolveStatus::MaxIterations | SolveStatus::RankDeficientAbort),
            "{:?} {:?}",
            trace.status,
            trace.residual_norms
        );
        assert!(trace.final_residual() > 1e-12);
    }

    #[test]
    fn trace_lengths_and_affine_membership() {
        let inst = sigmoid_problem(20, 10, 7).unwrap();
        for rule in [StepRule::ProjectCurrent, StepRule::PolyakTremba] {
            let trace = solve(&inst.problem, &inst.x0, rule, &SolveConfig::default()).unwrap();
            assert_eq!(trace.residual_norms.len(), trace.iterates.len());
            assert_eq!(trace.step_norms.len() + 1, trace.iterates.len());
            for w in trace.iterates.windows(2) {
                let g = inst.problem.residual(&w[0]);
                let h = inst.problem.differential(&w[0]);
                let lin = g.add(&h.mul_vec(&w[1].sub(&w[0])));
                assert!(lin.norm() <= 1e-9 * (1.0 + g.norm()));
            }
        }
    }

    #[test]
    fn rank_deficient_start_is_a_status() {
        let p = p2().unwrap();
        // (0, 0, 1): H = [[0,0,-1],[0,0,-1.1]]
        let trace = solve(&p, &[0.0, 0.0, 1.0], StepRule::ProjectCurrent, &SolveConfig::default()).unwrap();
        assert_eq!(trace.status, SolveStatus::RankDeficientAbort);
        assert_eq!(trace.iterates.len(), 1);
    }

    #[test]
    fn invalid_config_rejected() {
        let p = p1().unwrap();
        let cfg = SolveConfig {
            max_iter: 0,
            ..SolveConfig::default()
        };
        assert!(solve(&p, &[3.0, 4.0], StepRule::ProjectCurrent, &cfg).is_err());
        assert!(solve(&p, &[3.0], StepRule::ProjectCurrent, &SolveConfig::default()).is_err());
    }

    #[test]
    fn rule_names_round_trip() {
        for rule in [StepRule::ProjectCurrent, StepRule::PolyakTremba] {
            assert_eq!(rule.as_str().parse::<StepRule>().unwrap(), rule);
        }
        assert!("newton".parse::<StepRule>().is_err());
    }
}

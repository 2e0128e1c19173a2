//! Problems as a residual map paired with one Newton-differential selection.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

pub type ResidualFn = Arc<dyn Fn(&[f64]) -> Vector + Send + Sync>;
pub type DifferentialFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

/// Residual bound a `known_zero` must satisfy.
pub const KNOWN_ZERO_TOL: f64 = 1e-10;

/// `G: R^m -> R^n` with `n <= m`, plus a map `x -> H(x)` returning one
/// element of the Newton differential at `x`.
#[derive(Clone)]
pub struct Problem {
    name: String,
    m: usize,
    n: usize,
    residual: ResidualFn,
    differential: DifferentialFn,
    known_zero: Option<Vector>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("known_zero", &self.known_zero)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new<R, D>(name: impl Into<String>, m: usize, n: usize, residual: R, differential: D) -> Result<Self>
    where
        R: Fn(&[f64]) -> Vector + Send + Sync + 'static,
        D: Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    {
        if n > m {
            return Err(Error::ShapeMismatch(format!(
                "{n} equations in {m} unknowns; need n <= m"
            )));
        }
        Ok(Self {
            name: name.into(),
            m,
            n,
            residual: Arc::new(residual),
            differential: Arc::new(differential),
            known_zero: None,
        })
    }

    /// Attaches a certified zero; fails if `‖G(zero)‖ > 1e-10`.
    pub fn with_known_zero(mut self, zero: Vector) -> Result<Self> {
        if zero.dim() != self.m {
            return Err(Error::ShapeMismatch(format!(
                "known zero of length {} for m = {}",
                zero.dim(),
                self.m
            )));
        }
        let r = self.residual(&zero).norm();
        if !(r <= KNOWN_ZERO_TOL) {
            return Err(Error::InvalidArgument(format!(
                "known zero has residual norm {r:e}"
            )));
        }
        self.known_zero = Some(zero);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of unknowns.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of equations.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn known_zero(&self) -> Option<&Vector> {
        self.known_zero.as_ref()
    }

    pub fn residual(&self, x: &[f64]) -> Vector {
        debug_assert_eq!(x.len(), self.m);
        let g = (self.residual)(x);
        debug_assert_eq!(g.dim(), self.n);
        g
    }

    pub fn differential(&self, x: &[f64]) -> Matrix {
        debug_assert_eq!(x.len(), self.m);
        let h = (self.differential)(x);
        debug_assert_eq!(h.shape(), (self.n, self.m));
        h
    }
}

/// A problem whose differential is the analytic Jacobian of a C¹ map.
pub fn smooth_problem<R, J>(
    residual: R,
    analytic_jacobian: J,
    m: usize,
    n: usize,
    name: impl Into<String>,
    known_zero: Option<Vector>,
) -> Result<Problem>
where
    R: Fn(&[f64]) -> Vector + Send + Sync + 'static,
    J: Fn(&[f64]) -> Matrix + Send + Sync + 'static,
{
    let p = Problem::new(name, m, n, residual, analytic_jacobian)?;
    match known_zero {
        Some(z) => p.with_known_zero(z),
        None => Ok(p),
    }
}

/// Central-difference Jacobian with steps `h_j = sqrt(eps)·(1 + |x_j|)`.
pub fn fd_jacobian<R>(residual: R, x: &[f64], n: usize) -> Result<Matrix>
where
    R: Fn(&[f64]) -> Vector,
{
    let m = x.len();
    let mut jac = Matrix::zeros(n, m);
    let mut probe = x.to_vec();
    let sqrt_eps = f64::EPSILON.sqrt();
    for j in 0..m {
        let h = sqrt_eps * (1.0 + x[j].abs());
        probe[j] = x[j] + h;
        let plus = residual(&probe);
        probe[j] = x[j] - h;
        let minus = residual(&probe);
        probe[j] = x[j];
        if plus.dim() != n || minus.dim() != n {
            return Err(Error::ShapeMismatch(format!(
                "residual returned length {} but n = {n}",
                plus.dim()
            )));
        }
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFiniteResidual);
        }
        // actual spacing after rounding x ± h
        let width = (x[j] + h) - (x[j] - h);
        for i in 0..n {
            jac.set(i, j, (plus[i] - minus[i]) / width);
        }
    }
    Ok(jac)
}

/// Which argument's derivative row to use where `min(a_i, b_i)` ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    #[default]
    FirstArgument,
    SecondArgument,
}

/// Componentwise `min(a, b)` together with a Clarke-Jacobian selection.
///
/// Row `i` of the returned matrix is row `i` of `ja` when `a_i < b_i`, of
/// `jb` when `b_i < a_i`, and follows `rule` on exact ties.
pub fn min_residual_and_differential(
    a: &[f64],
    b: &[f64],
    ja: &Matrix,
    jb: &Matrix,
    rule: BranchRule,
) -> Result<(Vector, Matrix)> {
    let n = a.len();
    if b.len() != n || ja.rows() != n || jb.shape() != ja.shape() {
        return Err(Error::ShapeMismatch(format!(
            "min of lengths {} and {} with differentials {:?} and {:?}",
            n,
            b.len(),
            ja.shape(),
            jb.shape()
        )));
    }
    let mut value = Vec::with_capacity(n);
    let mut jac = Matrix::zeros(n, ja.cols());
    for i in 0..n {
        let first = match a[i].partial_cmp(&b[i]) {
            Some(std::cmp::Ordering::Less) => true,
            Some(std::cmp::Ordering::Greater) => false,
            _ => rule == BranchRule::FirstArgument,
        };
        let (v, row) = if first { (a[i], ja.row(i)) } else { (b[i], jb.row(i)) };
        value.push(v);
        jac.row_mut(i).copy_from_slice(row);
    }
    Ok((value.into(), jac))
}

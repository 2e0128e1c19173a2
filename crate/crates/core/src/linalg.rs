//! Dense linear algebra for short, wide matrices.
//!
//! Matrices are stored row-major. The pseudo-inverse of a full row-rank
//! `H` (n×m, n ≤ m) is applied as `Hᵀ(HHᵀ)⁻¹v` through a Cholesky
//! factorization of the n×n Gram matrix; `H⁺` itself is only formed on
//! request by [`materialize_pinv`].

use std::ops::{Deref, Index};

use crate::error::{Error, Result};

/// Default relative pivot threshold for the Gram factorization.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;

/// Dense real vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting non-finite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().all(|v| v.is_finite()) {
            Ok(Self(entries))
        } else {
            Err(Error::NonFinite("vector entries"))
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn sub(&self, other: &[f64]) -> Vector {
        debug_assert_eq!(self.dim(), other.len());
        Vector(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &[f64]) -> Vector {
        debug_assert_eq!(self.dim(), other.len());
        Vector(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self · v`
    pub fn mul_vec(&self, v: &[f64]) -> Vector {
        debug_assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect::<Vec<_>>().into()
    }

    /// `selfᵀ · v`
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vector {
        debug_assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, h) in out.iter_mut().zip(self.row(i)) {
                *o += h * vi;
            }
        }
        out.into()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out.row_mut(i).iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "sub shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &j) in columns.iter().enumerate() {
                out.data[i * columns.len() + k] = self.get(i, j);
            }
        }
        out
    }

    /// `self · selfᵀ`
    pub fn gram(&self) -> Matrix {
        let n = self.rows;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                g.data[i * n + j] = v;
                g.data[j * n + i] = v;
            }
        }
        g
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

/// Outcome of the rank check performed while factoring `HHᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    /// Number of rows of `H`.
    pub rows: usize,
    pub effective_rank: usize,
    /// Smallest Cholesky pivot encountered (accepted or rejected), in magnitude.
    pub smallest_pivot: f64,
    pub full_row_rank: bool,
}

/// Cholesky factor `L` of `HHᵀ = LLᵀ`, reusable for several right-hand sides.
#[derive(Debug, Clone)]
pub struct GramFactor {
    lower: Matrix,
}

impl GramFactor {
    pub fn dim(&self) -> usize {
        self.lower.rows
    }

    /// Solves `(HHᵀ) z = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vector {
        let n = self.dim();
        debug_assert_eq!(rhs.len(), n);
        let l = &self.lower;
        let mut z = rhs.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l.get(i, k) * z[k]).sum();
            z[i] = (z[i] - s) / l.get(i, i);
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| l.get(k, i) * z[k]).sum();
            z[i] = (z[i] - s) / l.get(i, i);
        }
        z.into()
    }
}

fn check_wide(h: &Matrix, pivot_tol: f64) -> Result<()> {
    if h.rows > h.cols {
        return Err(Error::ShapeMismatch(format!(
            "expected rows <= cols, got {}x{}",
            h.rows, h.cols
        )));
    }
    if !(pivot_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("pivot_tol must be > 0, got {pivot_tol}")));
    }
    Ok(())
}

/// Factors `HHᵀ` by Cholesky and reports its rank.
///
/// A pivot `d_j ≤ pivot_tol · max_i (HHᵀ)_ii` is rejected. Elimination
/// continues past rejected pivots so `effective_rank` counts every
/// accepted one, then the call fails with [`Error::RankDeficient`].
pub fn gram_factorization(h: &Matrix, pivot_tol: f64) -> Result<(GramFactor, RankReport)> {
    check_wide(h, pivot_tol)?;
    let n = h.rows;
    let a = h.gram();
    let max_diag = (0..n).map(|i| a.get(i, i)).fold(0.0_f64, f64::max);
    let threshold = pivot_tol * max_diag;

    let mut l = Matrix::zeros(n, n);
    let mut accepted = 0;
    let mut smallest = f64::INFINITY;
    for j in 0..n {
        let d = a.get(j, j) - (0..j).map(|k| l.get(j, k).powi(2)).sum::<f64>();
        smallest = smallest.min(d.abs());
        if d <= threshold {
            // leave column j of L at zero
            continue;
        }
        accepted += 1;
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l.get(i, k) * l.get(j, k)).sum();
            l.set(i, j, (a.get(i, j) - s) / ljj);
        }
    }
    if n == 0 {
        smallest = 0.0;
    }
    let report = RankReport {
        rows: n,
        effective_rank: accepted,
        smallest_pivot: smallest,
        full_row_rank: accepted == n,
    };
    if !report.full_row_rank {
        return Err(Error::RankDeficient(report));
    }
    Ok((GramFactor { lower: l }, report))
}

/// Applies the pseudo-inverse: `Hᵀ(HHᵀ)⁻¹ v`.
pub fn apply_pinv(h: &Matrix, v: &[f64], pivot_tol: f64) -> Result<Vector> {
    if v.len() != h.rows {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} for a {}x{} matrix",
            v.len(),
            h.rows,
            h.cols
        )));
    }
    let (factor, _) = gram_factorization(h, pivot_tol)?;
    Ok(h.tr_mul_vec(&factor.solve(v)))
}

/// Forms `H⁺` explicitly as an m×n matrix.
pub fn materialize_pinv(h: &Matrix, pivot_tol: f64) -> Result<Matrix> {
    let (factor, _) = gram_factorization(h, pivot_tol)?;
    let (n, m) = h.shape();
    let mut out = Matrix::zeros(m, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = h.tr_mul_vec(&factor.solve(&e));
        for (i, v) in col.iter().enumerate() {
            out.set(i, j, *v);
        }
        e[j] = 0.0;
    }
    Ok(out)
}

/// Euclidean projection of `x` onto `{y : Hy = b}`, i.e. `x - H⁺(Hx - b)`.
pub fn project_affine(x: &[f64], h: &Matrix, b: &[f64], pivot_tol: f64) -> Result<Vector> {
    if x.len() != h.cols || b.len() != h.rows {
        return Err(Error::ShapeMismatch(format!(
            "x of length {}, b of length {} for a {}x{} matrix",
            x.len(),
            b.len(),
            h.rows,
            h.cols
        )));
    }
    let defect = h.mul_vec(x).sub(b);
    let correction = apply_pinv(h, &defect, pivot_tol)?;
    Ok(Vector::from(x.to_vec()).sub(&correction))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = DEFAULT_PIVOT_TOL;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn pinv_of_scaled_row() {
        let h = Matrix::from_rows(&[vec![2.0, 0.0, 0.0]]).unwrap();
        let y = apply_pinv(&h, &[3.0], TOL).unwrap();
        assert!(close(&y, &[1.5, 0.0, 0.0], 1e-15));
        let p = materialize_pinv(&h, TOL).unwrap();
        assert_eq!(p.shape(), (3, 1));
        assert!(close(p.as_slice(), &[0.5, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn pinv_of_identity() {
        let h = Matrix::identity(2);
        let y = apply_pinv(&h, &[-1.25, 7.0], TOL).unwrap();
        assert!(close(&y, &[-1.25, 7.0], 1e-15));
        let p = materialize_pinv(&h, TOL).unwrap();
        assert_eq!(p, Matrix::identity(2));
    }

    #[test]
    fn pinv_two_by_three() {
        // min-norm solution of y1 + y2 = 2, y3 = 5
        let h = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let y = apply_pinv(&h, &[2.0, 5.0], TOL).unwrap();
        assert!(close(&y, &[1.0, 1.0, 5.0], 1e-14));
    }

    #[test]
    fn projection_examples() {
        let h = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let y = project_affine(&[1.0, 1.0], &h, &[0.0], TOL).unwrap();
        assert!(close(&y, &[0.0, 0.0], 1e-15));

        let on_set = [0.25, -0.25];
        let y = project_affine(&on_set, &h, &[0.0], TOL).unwrap();
        assert!(close(&y, &on_set, 1e-15));

        let h = Matrix::from_rows(&[vec![4.0, 0.0]]).unwrap();
        let y = project_affine(&[2.0, 0.0], &h, &[5.0], TOL).unwrap();
        assert!(close(&y, &[1.25, 0.0], 1e-15));
    }

    #[test]
    fn identity_factorization_report() {
        let (_, report) = gram_factorization(&Matrix::identity(3), TOL).unwrap();
        assert!(report.full_row_rank);
        assert_eq!(report.effective_rank, 3);
        assert_eq!(report.smallest_pivot, 1.0);
    }

    #[test]
    fn duplicated_row_is_rank_deficient() {
        let h = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0, 4.0],
            vec![0.5, -1.0, 0.0, 2.0],
            vec![1.0, 2.0, 3.0, 4.0],
        ])
        .unwrap();
        match gram_factorization(&h, TOL) {
            Err(Error::RankDeficient(r)) => {
                assert_eq!(r.effective_rank, 2);
                assert!(!r.full_row_rank);
                assert_eq!(r.rows, 3);
            }
            other => panic!("expected RankDeficient, got {other:?}"),
        }
        assert!(matches!(apply_pinv(&h, &[1.0, 1.0, 1.0], TOL), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn zero_matrix_is_rank_deficient() {
        let h = Matrix::zeros(2, 3);
        assert!(matches!(gram_factorization(&h, TOL), Err(Error::RankDeficient(r)) if r.effective_rank == 0));
    }

    #[test]
    fn tall_matrix_rejected() {
        let h = Matrix::zeros(3, 2);
        assert!(matches!(gram_factorization(&h, TOL), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            gram_factorization(&Matrix::identity(2), 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constructors_validate() {
        assert!(Matrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::new(1, 1, vec![f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn factor_reused_for_several_rhs() {
        let h = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0]]).unwrap();
        let (factor, _) = gram_factorization(&h, TOL).unwrap();
        let g = h.gram();
        for rhs in [[1.0, 0.0], [0.0, 1.0], [-2.0, 5.0]] {
            let z = factor.solve(&rhs);
            assert!(close(&g.mul_vec(&z), &rhs, 1e-13));
        }
    }
}

//! Empirical checks of Newton differentiability and convergence order.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::model::{Problem, KNOWN_ZERO_TOL};
use crate::problems::Rng64;

/// Below this separation the Newton quotient is not evaluated.
pub const MIN_SEPARATION: f64 = 1e-15;

/// Default number of sampled directions per radius in [`nd_scan`].
pub const DEFAULT_DIRECTIONS: usize = 64;

const SCAN_SEED: u64 = 0x5EED_0F_D1FF;

/// `‖G(x) - G(x̄) - H(x)(x - x̄)‖ / ‖x - x̄‖`, with the differential taken
/// at `x` rather than at `x̄`.
pub fn nd_residual(p: &Problem, x: &[f64], xbar: &[f64]) -> Result<f64> {
    if x.len() != p.m() || xbar.len() != p.m() {
        return Err(Error::ShapeMismatch(format!(
            "points of length {} and {} for m = {}",
            x.len(),
            xbar.len(),
            p.m()
        )));
    }
    let dx = Vector::from(x.to_vec()).sub(xbar);
    let sep = dx.norm();
    if sep < MIN_SEPARATION {
        return Err(Error::ZeroSeparation(MIN_SEPARATION));
    }
    let h = p.differential(x);
    let defect = p.residual(x).sub(&p.residual(xbar)).sub(&h.mul_vec(&dx));
    Ok(defect.norm() / sep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NdScan {
    pub radii: Vec<f64>,
    /// Max of [`nd_residual`] over the sampled directions, per radius.
    pub worst_ratio: Vec<f64>,
}

impl NdScan {
    pub fn first(&self) -> f64 {
        self.worst_ratio[0]
    }

    pub fn last(&self) -> f64 {
        *self.worst_ratio.last().expect("nonempty scan")
    }
}

/// Samples `directions` seeded unit directions `d` and records, for every
/// radius `r`, the largest quotient at `x̄ + r·d`. The same directions are
/// used at every radius.
pub fn nd_scan(p: &Problem, xbar: &[f64], directions: usize, radii: &[f64]) -> Result<NdScan> {
    if directions == 0 || radii.is_empty() {
        return Err(Error::InvalidArgument("need at least one direction and one radius".into()));
    }
    if !radii.iter().all(|r| *r > 0.0) || !radii.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("radii must be positive and strictly decreasing".into()));
    }
    let g = p.residual(xbar).norm();
    if !(g <= KNOWN_ZERO_TOL) {
        return Err(Error::InvalidArgument(format!(
            "scan center is not a zero: residual norm {g:e}"
        )));
    }
    let mut rng = Rng64::new(SCAN_SEED);
    let dirs: Vec<Vector> = (0..directions)
        .map(|_| {
            let d = Vector::from(rng.normal_vec(p.m()));
            d.scale(1.0 / d.norm())
        })
        .collect();
    let base = Vector::from(xbar.to_vec());
    let worst_ratio = radii
        .iter()
        .map(|&r| {
            dirs.iter().try_fold(0.0_f64, |worst, d| {
                let x = base.add(&d.scale(r));
                Ok(worst.max(nd_residual(p, &x, xbar)?))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NdScan {
        radii: radii.to_vec(),
        worst_ratio,
    })
}

/// `r_{k+1} ≈ C·r_k^order` fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub order: f64,
    /// `s_{k+1} / s_k` for each pair used in the fit.
    pub c_sequence: Vec<f64>,
    pub points_used: usize,
}

/// Least-squares slope of `log s_{k+1}` against `log s_k` over every
/// consecutive pair with both values above `floor`.
pub fn estimate_order(series: &[f64], floor: f64) -> Result<RateEstimate> {
    let pairs: Vec<(f64, f64)> = series
        .windows(2)
        .filter(|w| w[0] > floor && w[1] > floor && w[0].is_finite() && w[1].is_finite())
        .map(|w| (w[0], w[1]))
        .collect();
    fit_pairs(&pairs)
}

/// [`estimate_order`] restricted to the last `max_pairs` usable pairs.
pub fn estimate_tail_order(series: &[f64], floor: f64, max_pairs: usize) -> Result<RateEstimate> {
    let pairs: Vec<(f64, f64)> = series
        .windows(2)
        .filter(|w| w[0] > floor && w[1] > floor && w[0].is_finite() && w[1].is_finite())
        .map(|w| (w[0], w[1]))
        .collect();
    let start = pairs.len().saturating_sub(max_pairs);
    fit_pairs(&pairs[start..])
}

fn fit_pairs(pairs: &[(f64, f64)]) -> Result<RateEstimate> {
    if pairs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable pairs, need at least 2",
            pairs.len()
        )));
    }
    let n = pairs.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(a, b)| (a.ln(), b.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("series is constant over the fit window".into()));
    }
    Ok(RateEstimate {
        order: sxy / sxx,
        c_sequence: pairs.iter().map(|(a, b)| b / a).collect(),
        points_used: pairs.len() + 1,
    })
}

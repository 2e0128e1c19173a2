use nalgebra::DMatrix;
use proptest::prelude::*;

use undernewton::linalg::{gram_factorization, materialize_pinv, project_affine, DEFAULT_PIVOT_TOL};
use undernewton::problems::{instantiate, Dims};
use undernewton::solver::solve;
use undernewton::{BenchmarkId, Error, Matrix, SolveConfig, StepRule};

/// Wide matrix `n x m` with entries in [-1, 1] plus a dominant diagonal so
/// it has full row rank.
fn wide_matrix() -> impl Strategy<Value = (Matrix, Vec<f64>, Vec<f64>)> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), n + 1..=8))
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-1.0..1.0f64, n * m),
                prop::collection::vec(-3.0..3.0f64, n),
                prop::collection::vec(-3.0..3.0f64, m),
            )
                .prop_map(move |(mut data, b, x)| {
                    for i in 0..n {
                        data[i * m + i] += 4.0;
                    }
                    (Matrix::new(n, m, data).unwrap(), b, x)
                })
        })
}

fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

proptest! {
    #[test]
    fn pinv_matches_svd((h, _, _) in wide_matrix()) {
        let ours = to_na(&materialize_pinv(&h, DEFAULT_PIVOT_TOL).unwrap());
        let svd = to_na(&h).pseudo_inverse(1e-14).unwrap();
        prop_assert!((&ours - &svd).norm() <= 1e-10 * svd.norm());
    }

    #[test]
    fn projection_is_feasible_and_idempotent((h, b, x) in wide_matrix()) {
        let y = project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL).unwrap();
        let feas = h.mul_vec(&y).sub(&b).norm();
        prop_assert!(feas <= 1e-10 * (1.0 + b.iter().map(|v| v * v).sum::<f64>().sqrt()));
        let yy = project_affine(&y, &h, &b, DEFAULT_PIVOT_TOL).unwrap();
        prop_assert!(yy.sub(&y).norm() <= 1e-10);
    }

    #[test]
    fn projection_is_closest_feasible_point((h, b, x) in wide_matrix(), t in -2.0..2.0f64) {
        // moving along the kernel away from the projection cannot get closer to x
        let y = project_affine(&x, &h, &b, DEFAULT_PIVOT_TOL).unwrap();
        let z: Vec<f64> = (0..h.cols()).map(|j| if j == h.cols() - 1 { 1.0 } else { 0.0 }).collect();
        let kz = project_affine(&z, &h, &vec![0.0; h.rows()], DEFAULT_PIVOT_TOL).unwrap();
        let other = y.add(&kz.scale(t));
        prop_assert!(x.iter().zip(y.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
            <= x.iter().zip(other.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>() + 1e-12);
    }

    #[test]
    fn full_row_rank_is_reported((h, _, _) in wide_matrix()) {
        let (_, report) = gram_factorization(&h, DEFAULT_PIVOT_TOL).unwrap();
        prop_assert!(report.full_row_rank);
        prop_assert_eq!(report.effective_rank, h.rows());
    }
}

#[test]
fn solves_are_deterministic() {
    let inst = instantiate(BenchmarkId::Sigmoid, 11, Some(Dims::Sigmoid { m: 12, n: 5 })).unwrap();
    let a = solve(&inst.problem, &inst.x0, StepRule::PolyakTremba, &SolveConfig::default()).unwrap();
    let b = solve(&inst.problem, &inst.x0, StepRule::PolyakTremba, &SolveConfig::default()).unwrap();
    assert_eq!(a.residual_norms, b.residual_norms);
    assert_eq!(a.final_iterate(), b.final_iterate());
}

#[test]
fn rank_deficient_gram_is_rejected() {
    let h = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
    assert!(materialize_pinv(&h, DEFAULT_PIVOT_TOL).is_err());
    match gram_factorization(&h, DEFAULT_PIVOT_TOL) {
        Err(Error::RankDeficient(report)) => {
            assert_eq!(report.effective_rank, 1);
            assert!(!report.full_row_rank);
        }
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

use eptctr::linalg::sym_eigen;
use eptctr::{fd_hessian, solve_spd, sym_eigenvalues, Quadratic, SymMatrix, Vector};
use proptest::prelude::*;

/// `MᵀM/n + c·I` from a row-major `M`.
fn spd_from(n: usize, m: &[f64], shift: f64) -> SymMatrix<f64> {
    SymMatrix::from_lower_fn(n, |i, j| {
        let mm: f64 = (0..n).map(|k| m[k * n + i] * m[k * n + j]).sum();
        mm / n as f64 + if i == j { shift } else { 0.0 }
    })
}

fn spd_system() -> impl Strategy<Value = (SymMatrix<f64>, Vector<f64>)> {
    (1usize..=50).prop_flat_map(|n| {
        (prop::collection::vec(-3.0f64..3.0, n * n), 1e-3f64..10.0, prop::collection::vec(-100.0f64..100.0, n))
            .prop_map(move |(m, shift, rhs)| (spd_from(n, &m, shift), Vector::from_vec(rhs)))
    })
}

/// Matrices and points on a coarse dyadic grid, so every operation in a
/// forward difference of the quadratic's gradient is exact in `f64`.
fn dyadic_quadratic() -> impl Strategy<Value = (SymMatrix<f64>, Vector<f64>, Vector<f64>)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(-64i32..=64, n * (n + 1) / 2),
            prop::collection::vec(-64i32..=64, n),
            prop::collection::vec(-64i32..=64, n),
        )
            .prop_map(move |(a, b, x)| {
                let mut it = a.into_iter();
                let matrix = SymMatrix::from_lower_fn(n, |_, _| f64::from(it.next().unwrap()) / 8.0);
                let linear = Vector::from_vec(b.into_iter().map(|v| f64::from(v) / 4.0).collect());
                let x = Vector::from_vec(x.into_iter().map(|v| f64::from(v) / 16.0).collect());
                (matrix, linear, x)
            })
    })
}

fn max_rel_diff(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> f64 {
    let n = a.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    worst / b.max_abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_spd_residual_within_bound((b, rhs) in spd_system()) {
        let s = solve_spd(&b, &rhs).unwrap();
        let residual = b.mul_vec(&s).sub(&rhs).norm_inf();
        prop_assert!(residual <= 1e-8 * (1.0 + rhs.norm_inf()), "residual {residual:e}");
    }

    #[test]
    fn fd_hessian_recovers_quadratic_matrix(
        (matrix, linear, x) in dyadic_quadratic(),
        k in 14i32..=26,
    ) {
        // eps = 2^-k spans roughly [1.5e-8, 6.1e-5]
        let eps = 2f64.powi(-k);
        let q = Quadratic::new(matrix.clone(), linear);
        let h = fd_hessian(&q, &x, eps).unwrap();
        prop_assert!(max_rel_diff(&h, &matrix) <= 1e-8);
        prop_assert_eq!(h.max_asymmetry(), 0.0);
    }

    #[test]
    fn fd_hessian_of_sparse_quadratic_near_origin(
        diag in prop::collection::vec(0.5f64..20.0, 1..=10),
        eps in 1e-8f64..1e-4,
    ) {
        let n = diag.len();
        let matrix = SymMatrix::from_diagonal(&diag);
        // a homogeneous quadratic evaluated at 0: g(0) = 0 and g(eps·eᵢ) = eps·A eᵢ
        let q = Quadratic::homogeneous(matrix.clone());
        let h = fd_hessian(&q, &Vector::zeros(n), eps).unwrap();
        prop_assert!(max_rel_diff(&h, &matrix) <= 1e-8);
    }

    #[test]
    fn eigenpairs_have_small_residuals(
        n in 1usize..=12,
        seed in prop::collection::vec(-5.0f64..5.0, 78),
    ) {
        let mut it = seed.into_iter().cycle();
        let b = SymMatrix::from_lower_fn(n, |_, _| it.next().unwrap());
        let (values, vectors) = sym_eigen(&b).unwrap();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let scale = b.norm().max(1.0);
        for (lambda, v) in values.iter().zip(&vectors) {
            let mut r = b.mul_vec(v);
            r.axpy(-lambda, v);
            prop_assert!(r.norm() <= 1e-8 * scale, "residual {:e}", r.norm());
        }
        prop_assert_eq!(sym_eigenvalues(&b).unwrap(), values);
    }

    #[test]
    fn spd_eigenvalues_are_positive((b, _rhs) in spd_system()) {
        prop_assume!(b.dim() <= 20);
        let values = sym_eigenvalues(&b).unwrap();
        prop_assert!(values[0] > 0.0);
    }
}

#[test]
fn documented_small_systems() {
    let b = SymMatrix::<f64>::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
    let s = solve_spd(&b, &Vector::from_slice(&[1.0, 2.0])).unwrap();
    assert!((s[0] - 1.0 / 11.0).abs() < 1e-15 && (s[1] - 7.0 / 11.0).abs() < 1e-15);
    let d = SymMatrix::<f64>::from_diagonal(&[2.0, 0.5]);
    let s = solve_spd(&d, &Vector::from_slice(&[2.0, 2.0])).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 4.0).abs() < 1e-15);
    let values = sym_eigenvalues(&SymMatrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()).unwrap();
    assert!((values[0] - 1.0).abs() < 1e-14 && (values[1] - 3.0).abs() < 1e-14);
}

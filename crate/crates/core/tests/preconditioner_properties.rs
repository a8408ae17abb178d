use eptctr::{apply_lbfgs_inverse, scaling_secant_check, sym_eigenvalues, CurvaturePair, SymMatrix, Vector};
use proptest::prelude::*;

const THETA: f64 = 1e-6;

/// Pairs whose angle is bounded away from 90°, where the update is well
/// conditioned enough for tight absolute tolerances.
fn pair() -> impl Strategy<Value = CurvaturePair<f64>> {
    (3usize..=20)
        .prop_flat_map(|n| (prop::collection::vec(-2.0f64..2.0, n), prop::collection::vec(-2.0f64..2.0, n)))
        .prop_filter_map("curvature test", |(s, y)| {
            let pair = CurvaturePair::new(Vector::from_vec(s), Vector::from_vec(y)).ok()?;
            let cos = pair.sy() / (pair.s.norm() * pair.y.norm());
            (pair.passes_curvature_test(THETA) && cos.abs() > 0.05).then_some(pair)
        })
}

fn dense(pair: &CurvaturePair<f64>) -> SymMatrix<f64> {
    let (s, y) = (&pair.s, &pair.y);
    let sy = pair.sy();
    let yy = y.norm_squared();
    SymMatrix::from_lower_fn(s.len(), |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - (y[i] * s[j] + s[i] * y[j]) / sy + 2.0 * yy / (sy * sy) * s[i] * s[j]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spectrum_is_unit_except_reciprocal_pair(p in pair()) {
        let n = p.dim();
        let mut eig = sym_eigenvalues(&dense(&p)).unwrap();
        prop_assert!(eig[0] > 0.5 - 1e-10);
        eig.sort_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()));
        for e in &eig[..n - 2] {
            prop_assert!((e - 1.0).abs() <= 1e-8);
        }
        let (mu1, mu2) = (eig[n - 2], eig[n - 1]);
        prop_assert!((1.0 / mu1 + 1.0 / mu2 - 2.0).abs() <= 1e-8);
        let product = p.y.norm_squared() * p.s.norm_squared() / (p.sy() * p.sy());
        prop_assert!((mu1 * mu2 / product - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn scaling_secant_property(p in pair()) {
        prop_assert!(scaling_secant_check(&p).unwrap() <= 1e-10 * p.y.norm());
    }

    #[test]
    fn matrix_free_product_matches_dense(p in pair(), g in prop::collection::vec(-10.0f64..10.0, 20)) {
        let g = Vector::from_slice(&g[..p.dim()]);
        let diff = apply_lbfgs_inverse(&p, &g).unwrap().sub(&dense(&p).mul_vec(&g)).norm();
        prop_assert!(diff <= 1e-12 * g.norm(), "{diff:e}");
    }

    #[test]
    fn matrix_free_product_is_symmetric(p in pair()) {
        let n = p.dim();
        let cols: Vec<Vector<f64>> = (0..n).map(|j| apply_lbfgs_inverse(&p, &Vector::unit(n, j)).unwrap()).collect();
        for (i, col) in cols.iter().enumerate() {
            for j in 0..i {
                prop_assert!((cols[j][i] - col[j]).abs() <= 1e-12 * (1.0 + col.norm_inf()));
            }
        }
    }

    #[test]
    fn equal_pair_is_the_identity(s in prop::collection::vec(-5.0f64..5.0, 2..12), g in prop::collection::vec(-5.0f64..5.0, 12)) {
        let s = Vector::from_vec(s);
        prop_assume!(s.norm() > 1e-3);
        let n = s.len();
        let p = CurvaturePair::new(s.clone(), s).unwrap();
        let g = Vector::from_slice(&g[..n]);
        let hg = apply_lbfgs_inverse(&p, &g).unwrap();
        prop_assert!(hg.sub(&g).norm() <= 1e-12 * (1.0 + g.norm()));
    }
}

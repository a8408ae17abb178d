use eptctr::problems::{self, gradient_selfcheck, CatalogError, Dimension};
use eptctr::{fd_hessian, Vector};

const N: usize = 40;

#[test]
fn analytic_gradients_match_central_differences() {
    for (i, p) in problems::catalog::<f64>(N).iter().enumerate() {
        let err = gradient_selfcheck(p.as_ref(), 10, 7 + i as u64);
        assert!(err <= 1e-5, "{}: {err:e}", p.name());
    }
}

#[test]
fn known_minima_are_attained_at_the_listed_minimizers() {
    let mut checked = 0;
    for p in problems::catalog::<f64>(N) {
        let (Some(fmin), Some(xmin)) = (p.known_min(), p.minimizer()) else { continue };
        checked += 1;
        let f = p.value(&xmin);
        assert!((f - fmin).abs() <= 1e-6 * (1.0 + fmin.abs()), "{}: f(x*) = {f}, listed {fmin}", p.name());
        let g = p.gradient(&xmin);
        assert!(g.norm_inf() <= 1e-4 * (1.0 + fmin.abs()), "{}: ‖g(x*)‖∞ = {:e}", p.name(), g.norm_inf());
    }
    assert!(checked >= 15, "only {checked} problems list a minimizer");
}

#[test]
fn default_start_is_two_ones() {
    for p in problems::catalog::<f64>(N) {
        assert_eq!(p.default_x0(), Vector::filled(p.dim(), 2.0), "{}", p.name());
    }
}

#[test]
fn analytic_hessians_match_finite_differences() {
    let mut checked = 0;
    for p in problems::catalog::<f64>(12) {
        let x = Vector::from_fn(p.dim(), |i| 0.3 + 0.1 * i as f64);
        let Some(h) = p.hessian(&x) else { continue };
        checked += 1;
        let fd = fd_hessian(p.as_ref(), &x, 1e-6).unwrap();
        let scale = h.max_abs().max(1.0);
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                assert!((h[(i, j)] - fd[(i, j)]).abs() <= 1e-4 * scale, "{} at ({i}, {j})", p.name());
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn mandatory_suite_has_twenty_five_problems() {
    let names = problems::mandatory_names();
    assert_eq!(names.len(), 25);
    let suite = problems::mandatory_suite::<f64>(1000);
    let built: Vec<&str> = suite.iter().map(|p| p.name()).collect();
    assert_eq!(built, names);
    for p in &suite {
        let e = problems::entry(p.name()).unwrap();
        match e.dimension {
            Dimension::Fixed(k) => assert_eq!(p.dim(), k),
            Dimension::Parametric { .. } => assert_eq!(p.dim(), 1000, "{}", p.name()),
        }
    }
}

#[test]
fn lookup_normalizes_and_rejects() {
    assert_eq!(problems::by_name::<f64>("Dixon_Price", Some(10)).unwrap().name(), "dixon-price");
    assert!(matches!(problems::by_name::<f64>("nope", None).err(), Some(CatalogError::UnknownProblem { .. })));
    assert!(problems::by_name::<f64>("beale", Some(3)).is_err());
    assert_eq!(problems::by_name::<f64>("sphere", None).unwrap().dim(), problems::DEFAULT_LARGE_N);
}

#[test]
fn f32_and_f64_agree_at_the_start_point() {
    for name in problems::names() {
        let n = match problems::entry(name).unwrap().dimension {
            Dimension::Parametric { .. } => Some(8),
            Dimension::Fixed(_) => None,
        };
        let p64 = problems::by_name::<f64>(name, n).unwrap();
        let p32 = problems::by_name::<f32>(name, n).unwrap();
        let f64v = p64.value(&p64.default_x0());
        let f32v = f64::from(p32.value(&p32.default_x0()));
        assert!((f64v - f32v).abs() <= 1e-4 * (1.0 + f64v.abs()), "{name}: {f64v} vs {f32v}");
    }
}

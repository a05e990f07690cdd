use std::f64::consts::PI;

use krein_core::classify::from_boundary_operator;
use krein_core::weyl::{monotonicity_margin, weyl_m};
use krein_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(n: usize) -> TripletSpec {
    TripletSpec::unit(n).unwrap()
}

fn shifted_krein(spec: &TripletSpec, t: i64) -> ExtensionParams {
    let bk = build_bk(spec).unwrap();
    from_boundary_operator(&bk - &RationalMatrix::identity(spec.dim()).scale(&rational::int(t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_function_is_symmetric_and_real_on_conjugates(
        n in 1usize..=3,
        re in -40.0f64..40.0,
        im in prop_oneof![-20.0f64..-0.1, 0.1f64..20.0],
    ) {
        let spec = unit(n);
        let z = Complex64::new(re, im);
        let m = weyl_m(&spec, z).unwrap().m;
        let m_bar = weyl_m(&spec, z.conj()).unwrap().m;
        let scale = m.norm().max(1.0);
        prop_assert!((&m - m.transpose()).norm() <= 1e-9 * scale);
        prop_assert!((&m_bar - m.adjoint()).norm() <= 1e-9 * scale);
    }

    #[test]
    fn weyl_function_increases_on_negative_axis(n in 1usize..=2, x1 in -60.0f64..-0.05, frac in 0.05f64..0.95) {
        let x2 = x1 * frac;
        let margin = monotonicity_margin(&unit(n), x1, x2).unwrap();
        prop_assert!(margin >= -1e-9, "margin {margin}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Shooting agrees with the exact count for `B_K - tI`, which has `2n`
    /// negative squares for every `t > 0`. The lowest eigenvalue moves out like
    /// `t^(2n)`, so the floor has to follow it.
    #[test]
    fn shooting_matches_shifted_krein(n in 1usize..=2, t in 1i64..=40) {
        let spec = unit(n);
        let params = shifted_krein(&spec, t);
        let exact = negative_squares(&params, &spec).unwrap().kappa;
        let base = ScanConfig::default_for(&spec);
        let config = ScanConfig { lambda_min: base.lambda_min * ((1 + t) as f64).powi(2 * n as i32), ..base };
        let scan = count_negative_eigenvalues(&params, &spec, &config).unwrap();
        // Skipped overflowing grid points are fine; a truncated count is not.
        prop_assert!(!scan.warnings.iter().any(|w| w.contains("lower bound")), "{:?}", scan.warnings);
        prop_assert_eq!(exact, 2 * n);
        prop_assert_eq!(scan.negative_count, exact);
    }
}

#[test]
fn dirichlet_eigenvalues_scale_with_length() {
    for (b, expected) in [(1, 3), (2, 6)] {
        let spec = TripletSpec::new(1, rational::int(0), rational::int(b)).unwrap();
        let friedrichs = canonical_extensions(&spec).unwrap().friedrichs;
        let roots = positive_eigenvalues_in(&friedrichs, &spec, 1.0, 100.0, &ScanConfig::default_for(&spec)).unwrap();
        assert_eq!(roots.len(), expected, "b = {b}: {roots:?}");
        for (k, root) in roots.iter().enumerate() {
            let oracle = ((k + 1) as f64 * PI / b as f64).powi(2);
            assert!((root.lambda - oracle).abs() <= 1e-6 * oracle, "b = {b}: {} vs {oracle}", root.lambda);
            assert_eq!(root.nullity, 1);
        }
    }
}

#[test]
fn count_is_stable_under_tighter_nullity_tolerance() {
    let spec = unit(1);
    let robin = from_boundary_operator(-&RationalMatrix::identity(2));
    for params in [robin, shifted_krein(&spec, 1), canonical_extensions(&spec).unwrap().krein] {
        let base = ScanConfig::default_for(&spec);
        let tight = ScanConfig { nullity_tol: base.nullity_tol / 2.0, ..base };
        let a = count_negative_eigenvalues(&params, &spec, &base).unwrap();
        let b = count_negative_eigenvalues(&params, &spec, &tight).unwrap();
        assert_eq!(a.negative_count, b.negative_count);
        assert_eq!(a.kernel_dim_at_zero, b.kernel_dim_at_zero);
    }
}

#[test]
fn shallow_floor_is_flagged() {
    let spec = unit(1);
    let robin = from_boundary_operator(-&RationalMatrix::identity(2));
    let config = ScanConfig { lambda_min: -0.01, ..ScanConfig::default_for(&spec) };
    let report = count_negative_eigenvalues(&robin, &spec, &config).unwrap();
    assert_eq!(report.negative_count, 0);
    assert!(report.warnings.iter().any(|w| w.contains("lower bound")), "{:?}", report.warnings);
}

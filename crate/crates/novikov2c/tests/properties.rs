//! Randomized property tests for the spectral operator identities and the
//! model's structural invariants.

use proptest::prelude::*;

use novikov2c::grid::{SpectralField, SpectralGrid};
use novikov2c::model::{eval_g, rhs, FieldPair, ModelParams};

/// Random band-limited field from low-mode trigonometric coefficients.
fn field_from_coeffs(grid: &std::sync::Arc<SpectralGrid>, coeffs: &[(f64, f64)]) -> SpectralField {
    let l = grid.half_length();
    let coeffs = coeffs.to_vec();
    SpectralField::from_fn(grid, move |x| {
        let theta = std::f64::consts::PI * x / l;
        coeffs
            .iter()
            .enumerate()
            .map(|(m, (a, b))| a * (m as f64 * theta).cos() + b * (m as f64 * theta).sin())
            .sum()
    })
}

fn coeff_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8)
}

fn inner(a: &SpectralField, b: &SpectralField) -> f64 {
    a.values()
        .iter()
        .zip(b.values().iter())
        .map(|(&x, &y)| x * y)
        .sum::<f64>()
        * a.grid().spacing()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_round_trip(coeffs in coeff_strategy()) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs);
        let back = SpectralField::from_values(
            grid.clone(),
            grid.inverse(grid.forward(f.values())),
        )
        .unwrap();
        let scale = f.max_abs().max(1.0);
        prop_assert!((&back - &f).max_abs() / scale <= 1e-12);
    }

    #[test]
    fn helmholtz_inverse_is_linear(
        coeffs_f in coeff_strategy(),
        coeffs_g in coeff_strategy(),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs_f);
        let g = field_from_coeffs(&grid, &coeffs_g);
        let combined = (&(&f * alpha) + &(&g * beta)).helmholtz_inverse().unwrap();
        let separate = &(&f.helmholtz_inverse().unwrap() * alpha)
            + &(&g.helmholtz_inverse().unwrap() * beta);
        let scale = combined.max_abs().max(1.0);
        prop_assert!((&combined - &separate).max_abs() / scale <= 1e-12);
    }

    #[test]
    fn helmholtz_inverse_self_adjoint_positive(
        coeffs_f in coeff_strategy(),
        coeffs_g in coeff_strategy(),
    ) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs_f);
        let g = field_from_coeffs(&grid, &coeffs_g);
        let lf = f.helmholtz_inverse().unwrap();
        let lg = g.helmholtz_inverse().unwrap();
        let scale = inner(&f, &f).max(inner(&g, &g)).max(1.0);
        prop_assert!((inner(&lf, &g) - inner(&f, &lg)).abs() / scale <= 1e-12);
        prop_assert!(inner(&lf, &f) >= -1e-12 * scale);
    }

    #[test]
    fn derivative_is_skew(coeffs in coeff_strategy()) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs);
        let scale = inner(&f, &f).max(1.0);
        prop_assert!(inner(&f.derivative().unwrap(), &f).abs() / scale <= 1e-10);
    }

    #[test]
    fn derivative_commutes_with_helmholtz_inverse(coeffs in coeff_strategy()) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs);
        let a = f.derivative().unwrap().helmholtz_inverse().unwrap();
        let b = f.helmholtz_inverse().unwrap().derivative().unwrap();
        let scale = f.max_abs().max(1.0);
        prop_assert!((&a - &b).max_abs() / scale <= 1e-12);
    }

    #[test]
    fn dealiased_product_with_one_is_identity(coeffs in coeff_strategy()) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let f = field_from_coeffs(&grid, &coeffs);
        let one = SpectralField::from_fn(&grid, |_| 1.0);
        let p = grid.dealiased_product(&[&one, &f]).unwrap();
        let scale = f.max_abs().max(1.0);
        prop_assert!((&p - &f).max_abs() / scale <= 1e-12);
    }

    #[test]
    fn g_vanishes_at_zero(g_coeffs in prop::collection::vec(-2.0..2.0f64, 0..5)) {
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let params = ModelParams::new(1.0, 0.0, g_coeffs).unwrap();
        let zero = SpectralField::zeros(&grid);
        let g = eval_g(&params, &zero).unwrap();
        prop_assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn rho_decoupled_rhs_matches_single_component(
        coeffs in coeff_strategy(),
        k in prop::sample::select(vec![1.0f64, -1.0, 2.0]),
    ) {
        // with rho = 0 both rhs components must carry no rho influence:
        // drho_dt = 0 identically, on the grid
        let grid = SpectralGrid::new(64, 10.0).unwrap();
        let params = ModelParams::new(k, 0.1, vec![0.0, 0.0, 4.0 / 3.0]).unwrap();
        let state = FieldPair {
            u: field_from_coeffs(&grid, &coeffs),
            rho: SpectralField::zeros(&grid),
            time: 0.0,
        };
        let (_, drho) = rhs(&params, &state).unwrap();
        prop_assert_eq!(drho.max_abs(), 0.0);
    }
}

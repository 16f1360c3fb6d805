//! Randomized structural properties of the shared primitives: norm axioms,
//! calculus identities, operator linearity, shear-evaluator consistency, and
//! serialization round trips.

use std::sync::Arc;

use blayer_core::serialize::{config_hash, fmt_f64, parse_f64, JsonDoc};
use blayer_core::{
    apply_b, cumulative_integral, differentiate, wnorm, ComplexProfile, Grid1D, ShearFlow,
    WeightedNormParams,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_box(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(re, im)| Complex64::new(re, im))
}

fn profile_on(grid: &Arc<Grid1D>, r: f64) -> impl Strategy<Value = ComplexProfile> {
    let grid = Arc::clone(grid);
    prop::collection::vec(complex_box(r), grid.len())
        .prop_map(move |vals| ComplexProfile::new(Arc::clone(&grid), vals).unwrap())
}

proptest! {
    #[test]
    fn weighted_norm_is_absolutely_homogeneous(
        vals in prop::collection::vec(complex_box(1e3), 41),
        c in complex_box(10.0),
        alpha in 0.0f64..2.0,
        order in 0u8..2,
    ) {
        let grid = Arc::new(Grid1D::uniform(0.0, 2.0, 40).unwrap());
        let f = ComplexProfile::new(Arc::clone(&grid), vals).unwrap();
        let params = WeightedNormParams::new(alpha, order).unwrap();
        let lhs = wnorm(&f.scale(c), &params).unwrap();
        let rhs = c.norm() * wnorm(&f, &params).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn weighted_norm_satisfies_the_triangle_inequality(
        a in prop::collection::vec(complex_box(1e3), 41),
        b in prop::collection::vec(complex_box(1e3), 41),
        alpha in 0.0f64..2.0,
        order in 0u8..2,
    ) {
        let grid = Arc::new(Grid1D::uniform(0.0, 2.0, 40).unwrap());
        let f = ComplexProfile::new(Arc::clone(&grid), a).unwrap();
        let g = ComplexProfile::new(Arc::clone(&grid), b).unwrap();
        let params = WeightedNormParams::new(alpha, order).unwrap();
        let sum = wnorm(&f.add(&g).unwrap(), &params).unwrap();
        let parts = wnorm(&f, &params).unwrap() + wnorm(&g, &params).unwrap();
        prop_assert!(sum <= parts * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn integrating_the_derivative_recovers_the_function(
        a1 in -2.0f64..2.0,
        a2 in -2.0f64..2.0,
    ) {
        let grid = Arc::new(Grid1D::uniform(0.0, 5.0, 500).unwrap());
        let h = grid.h();
        let f = ComplexProfile::from_fn(Arc::clone(&grid), |y| {
            Complex64::new(a1 * y.sin(), a2 * (2.0 * y).cos())
        })
        .unwrap();
        let rebuilt = cumulative_integral(&differentiate(&f, 1).unwrap());
        let f0 = f.value(0);
        let mut worst = 0.0f64;
        for j in 0..f.len() {
            worst = worst.max((rebuilt.value(j) - (f.value(j) - f0)).norm());
        }
        let tol = 5.0 * h * h * (a1.abs() + 8.0 * a2.abs() + 1.0) + 1e-10;
        prop_assert!(worst <= tol, "error {worst:.3e} vs tol {tol:.3e}");
    }

    #[test]
    fn transport_operator_is_linear(
        seed in prop::collection::vec(complex_box(5.0), 301),
        c in complex_box(8.0),
        k in 1u64..256,
    ) {
        let grid = Arc::new(Grid1D::uniform(0.0, 12.0, 300).unwrap());
        let shear = ShearFlow::default_gaussian();
        let g = ComplexProfile::new(Arc::clone(&grid), seed).unwrap();
        let lhs = apply_b(k, &shear, &g.scale(c));
        let rhs = apply_b(k, &shear, &g).scale(c);
        let diff = lhs.sub(&rhs).unwrap().sup();
        prop_assert!(diff <= 1e-12 * (1.0 + rhs.sup()), "defect {diff:.3e}");
    }

    #[test]
    fn shear_evaluators_match_finite_differences(
        a in 1.0f64..3.0,
        kappa in 0.5f64..2.0,
        beta in 0.25f64..2.0,
        y in 0.0f64..6.0,
    ) {
        let shear = ShearFlow::gaussian_bump(a, kappa, beta).unwrap();
        let fd = 1e-4;
        let d1 = (shear.u(y + fd) - shear.u(y - fd)) / (2.0 * fd);
        prop_assert!((d1 - shear.u1(y)).abs() <= 1e-6 * (1.0 + shear.u1(y).abs()));
        // The curvature at the critical point is exactly −2κ.
        let d2a = (shear.u(a + fd) - 2.0 * shear.u(a) + shear.u(a - fd)) / (fd * fd);
        prop_assert!((d2a + 2.0 * kappa).abs() <= 1e-6 * 2.0 * kappa);
        prop_assert!((shear.u2(a) + 2.0 * kappa).abs() <= 1e-12);
    }

    #[test]
    fn decimal_serialization_round_trips_doubles(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let s = fmt_f64(v);
        let back = parse_f64(&s).unwrap();
        prop_assert_eq!(v.to_bits(), back.to_bits(), "{} → {}", v, s);
    }

    #[test]
    fn complex_fields_round_trip_through_json(
        v in complex_box(1e6),
        x in -1e6f64..1e6,
    ) {
        let mut doc = JsonDoc::new();
        doc.set_c64("z", v).set_f64("x", x).set_u64("n", 42);
        let text = doc.to_json();
        let back = JsonDoc::from_json(&text).unwrap();
        prop_assert_eq!(back.get_c64("z").unwrap(), v);
        prop_assert_eq!(back.get_f64("x").unwrap().to_bits(), x.to_bits());
        prop_assert_eq!(back.get_u64("n").unwrap(), 42);
        // Serialization is stable: a second pass is byte-identical.
        prop_assert_eq!(JsonDoc::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn config_hash_ignores_field_order(
        pairs in prop::collection::btree_map("[a-z]{1,8}", "[ -~]{0,12}", 1..8),
    ) {
        let fwd: Vec<(String, String)> =
            pairs.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut rev = fwd.clone();
        rev.reverse();
        prop_assert_eq!(config_hash(&fwd), config_hash(&rev));
    }

    #[test]
    fn covering_grids_pin_the_critical_point(
        a in 0.5f64..8.0,
        extent in 1.0f64..12.0,
        target_h in 1e-3f64..0.1,
    ) {
        let grid = Grid1D::covering_marked(0.0, a + extent, target_h, a).unwrap();
        grid.validate().unwrap();
        prop_assert!(grid.h() <= target_h * (1.0 + 1e-12));
        let ia = grid.critical_index().unwrap();
        prop_assert_eq!(grid.node(ia), a);
        prop_assert!(grid.hi() >= a + extent - 1e-12);
    }
}

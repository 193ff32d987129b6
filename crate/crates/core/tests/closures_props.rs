use mixedcol::closures::{
    coefficient_table, coefficients_profile, ClosureFamily, RichardsonProfile,
};
use mixedcol::{eval_f1, eval_f2, Closure};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = ClosureFamily> {
    prop_oneof![
        Just(ClosureFamily::R213),
        Just(ClosureFamily::R23),
        Just(ClosureFamily::R224)
    ]
}

proptest! {
    #[test]
    fn coefficients_positive_for_stable_r(fam in family(), r in 0.0f64..1e4) {
        let spec = Closure::standard(fam);
        prop_assert!(eval_f1(&spec, r).unwrap() > 0.0);
        prop_assert!(eval_f2(&spec, r).unwrap() > 0.0);
    }

    #[test]
    fn viscosity_decreases_with_stability(fam in family(), r in 0.0f64..1e3, dr in 1e-3f64..10.0) {
        let spec = Closure::standard(fam);
        prop_assert!(eval_f1(&spec, r + dr).unwrap() < eval_f1(&spec, r).unwrap());
    }

    #[test]
    fn coefficients_approach_background(fam in family()) {
        let spec = Closure::standard(fam);
        let f1 = eval_f1(&spec, 1e8).unwrap();
        let f2 = eval_f2(&spec, 1e8).unwrap();
        prop_assert!((f1 - spec.alpha1).abs() <= 1e-6 * spec.alpha1);
        prop_assert!((f2 - spec.alpha2).abs() <= 1e-6 * spec.alpha2);
    }

    #[test]
    fn table_matches_pointwise(fam in family(), lo in -0.5f64..0.0, span in 0.1f64..5.0, n in 2usize..200) {
        let spec = Closure::standard(fam);
        let table = coefficient_table(&spec, lo, lo + span, n).unwrap();
        for row in &table.rows {
            if let (Ok(f1), Ok(f2)) = (eval_f1(&spec, row.r), eval_f2(&spec, row.r)) {
                prop_assert!((row.f1 - f1).abs() <= 1e-12 * f1.abs().max(1e-300));
                prop_assert!((row.f2 - f2).abs() <= 1e-12 * f2.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn profile_matches_pointwise(fam in family(), rs in prop::collection::vec(0.0f64..100.0, 2..40)) {
        let spec = Closure::standard(fam);
        let profile = RichardsonProfile { values: rs.clone(), shear_floor: 1e-12 };
        let c = coefficients_profile(&spec, &profile);
        prop_assert!(c.negative_nu2_levels.is_empty());
        for (i, &r) in rs.iter().enumerate() {
            prop_assert!((c.nu1[i] - eval_f1(&spec, r).unwrap()).abs() <= 1e-15);
            prop_assert!((c.nu2[i] - eval_f2(&spec, r).unwrap()).abs() <= 1e-15);
        }
    }
}

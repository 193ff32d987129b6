use mixedcol::diagnostics::DiagnosticsReport;
use mixedcol::{
    gen_case_init, linearity_deviation, mixed_layer_depth, static_instability_zones, CaseConfig,
    CaseId, Diagnostics, Grid, GridF32,
};
use proptest::prelude::*;

/// Density increasing with depth: cumulative positive increments from the surface.
fn stable_column(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..0.01, n).prop_map(|steps| {
        let mut rho = vec![1022.0; steps.len()];
        for i in (0..steps.len() - 1).rev() {
            rho[i] = rho[i + 1] + steps[i];
        }
        rho
    })
}

proptest! {
    #[test]
    fn mld_ignores_density_offset(rho in stable_column(60), offset in -5.0f64..5.0) {
        let grid = Grid::from_levels(60, 1.0).unwrap();
        let shifted: Vec<f64> = rho.iter().map(|r| r + offset).collect();
        let a = mixed_layer_depth(&rho, &grid, 0.01).unwrap();
        let b = mixed_layer_depth(&shifted, &grid, 0.01).unwrap();
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn mld_lies_in_bracketing_cell(rho in stable_column(60)) {
        let grid = Grid::from_levels(60, 1.0).unwrap();
        let mld = mixed_layer_depth(&rho, &grid, 0.01).unwrap();
        prop_assert!((0.0..=grid.depth()).contains(&mld));
        let s = grid.surface();
        let target = rho[s] + 0.01;
        if let Some(i) = (0..s).rev().find(|&i| rho[i] > target) {
            prop_assert!(mld >= -grid.z(i + 1) && mld <= -grid.z(i));
        } else {
            prop_assert_eq!(mld, grid.depth());
        }
    }

    #[test]
    fn stable_columns_have_no_inversions(rho in stable_column(50)) {
        let grid = Grid::from_levels(50, 2.0).unwrap();
        prop_assert!(static_instability_zones(&rho, &grid).unwrap().is_empty());
    }

    #[test]
    fn linearity_is_affine_invariant(
        vals in prop::collection::vec(-1.0f64..1.0, 3..50),
        scale in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        shift in -100.0f64..100.0,
    ) {
        let grid = Grid::from_levels(vals.len(), 1.0).unwrap();
        let mapped: Vec<f64> = vals.iter().map(|x| scale * x + shift).collect();
        let a = linearity_deviation(&vals, &grid).unwrap();
        let b = linearity_deviation(&mapped, &grid).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn lines_have_zero_deviation(n in 3usize..100, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let grid = Grid::from_levels(n, 1.5).unwrap();
        let vals: Vec<f64> = grid.z_levels().iter().map(|z| a + b * z).collect();
        prop_assert!(linearity_deviation(&vals, &grid).unwrap() < 1e-9);
    }
}

#[test]
fn single_precision_diagnostics_track_double() {
    for case in CaseId::ALL {
        let cfg = CaseConfig::for_case(case);
        let g64: Grid = cfg.grid().unwrap();
        let g32: GridF32 = cfg.grid().unwrap();
        let d64: Diagnostics =
            DiagnosticsReport::compute(&gen_case_init(case, &g64), &g64).unwrap();
        let d32 = DiagnosticsReport::compute(&gen_case_init(case, &g32), &g32).unwrap();
        assert!(
            (d64.mld_m - f64::from(d32.mld_m)).abs() < 0.5,
            "{case:?}: {} vs {}",
            d64.mld_m,
            d32.mld_m
        );
        assert!((d64.surface_speed - f64::from(d32.surface_speed)).abs() < 1e-5);
        assert_eq!(d64.instability_zones.len(), d32.instability_zones.len());
    }
}

use std::f64::consts::PI;
use std::sync::Arc;

use locman::closed_form::{galerkin_t, optimal_offset_for_a};
use locman::config::RunConfig;
use locman::cost::build_paging_plan;
use locman::ctrw::{estimate_t_multi, SimConfig};
use locman::pde::{solve_mean_interval, DiscGrid};
use locman::protocol::{CellGrid, CellId};
use locman::{compute_diffusion, MobilityParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn paging_angles_sum_to_pi(m in 1usize..10, var in 0.0f64..10.0, px in -1.0f64..1.0, py in -1.0f64..1.0) {
        let plan = build_paging_plan(m, var, [0.0, 0.0], [1.0, 0.0]).unwrap();
        prop_assert!((plan.angles.iter().sum::<f64>() - PI).abs() < 1e-12);
        prop_assert!(plan.angles.iter().all(|a| *a >= 0.0));
        prop_assert!(plan.region_of([px, py]) < m);
    }

    #[test]
    fn hex_round_trip(q in -200i64..200, r in -200i64..200, area in 0.1f64..10.0) {
        let g = CellGrid::with_area(area);
        let c = CellId::new(q, r);
        prop_assert_eq!(g.cell_of(g.center(c)), c);
        prop_assert!(c.neighbors().iter().all(|n| n.distance(c) == 1 && n.is_adjacent(c)));
        prop_assert!((g.cell_area() - area).abs() < 1e-9 * area);
    }

    #[test]
    fn hex_lines_are_connected(q in -30i64..30, r in -30i64..30) {
        let g = CellGrid::default();
        let a = CellId::new(0, 0);
        let line = g.line(a, CellId::new(q, r));
        prop_assert_eq!(line.len() as i64, a.distance(CellId::new(q, r)) + 1);
        prop_assert!(line.windows(2).all(|w| w[0].is_adjacent(w[1])));
    }

    #[test]
    fn diffusion_is_psd_and_axial(k in 0.0f64..1e4, len_m in 1.0f64..100.0, eta in 1.0f64..60.0, var in 0.0f64..100.0) {
        let d = compute_diffusion(&MobilityParams::from_si(k, len_m, eta, var).unwrap()).unwrap();
        prop_assert!(d.is_psd(1e-12));
        prop_assert!(d.mu1() >= 0.0 && d.mu[1].abs() < 1e-9 && d.sigma[0][1].abs() < 1e-9 * d.trace());
    }

    #[test]
    fn offset_in_range(a_over_r in 1.0f64..1e6, r in 0.1f64..10.0) {
        let x = optimal_offset_for_a(a_over_r * r, r);
        prop_assert!(x > -r * (1.0 + 1e-12) && x <= 0.0);
    }

    #[test]
    fn galerkin_symmetric_and_nonnegative(k in 0.0f64..100.0, x in -1.0f64..1.0, y in -1.0f64..1.0, lambda in 0.0f64..5.0) {
        let g = galerkin_t(&compute_diffusion(&MobilityParams::reference(k)).unwrap(), 1.0, lambda).unwrap();
        prop_assert_eq!(g.t(x, y), g.t(x, -y));
        prop_assert!(g.t(x, y) >= 0.0);
    }

    #[test]
    fn config_round_trip(k in 0.0f64..100.0, lambda in 0.0f64..10.0, seed in any::<u64>()) {
        let c = RunConfig::parse(&format!("k = {k}\nlambda_per_hr = {lambda}\nseed = {seed}\n")).unwrap();
        prop_assert_eq!((c.k, c.lambda_per_hr, c.seed), (k, lambda, seed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn interval_falls_with_call_rate(k in 0.0f64..50.0, l1 in 0.0f64..3.0, dl in 0.01f64..3.0) {
        let d = compute_diffusion(&MobilityParams::reference(k)).unwrap();
        let g = Arc::new(DiscGrid::new(1.0, 12).unwrap());
        let a = solve_mean_interval(&d, 1.0, l1, &g).unwrap();
        let b = solve_mean_interval(&d, 1.0, l1 + dl, &g).unwrap();
        prop_assert!(a.values.iter().zip(&b.values).all(|(a, b)| b <= a));
    }

    #[test]
    fn coupled_estimates_are_ordered(k in 0.0f64..50.0, seed in any::<u64>()) {
        let lambdas = [0.0, 0.5, 2.0, 10.0];
        let est = estimate_t_multi([0.0, 0.0], 0.3, &lambdas, &MobilityParams::reference(k), &SimConfig::new(200, seed)).unwrap();
        prop_assert!(est.windows(2).all(|w| w[1].estimate.mean <= w[0].estimate.mean));
    }
}

//! Monte-Carlo examples. Exit is detected at jump end points, so walks
//! overshoot the boundary by O(E(ξ)); where that bias exceeds the CI the
//! exact optional-stopping identities are the oracle instead.

use std::sync::Arc;

use locman::ctrw::{
    empirical_density, estimate_t, exit_statistics, first_exit, DensityHistogram, DisplacementSampler, ExitOutcome,
    SimConfig,
};
use locman::mobility::{direction_moments, LengthDist, TimeDist};
use locman::pde::{solve_forward, solve_mean_interval, DiscGrid, TimeGrid};
use locman::{compute_diffusion, DiffusionParams, MobilityParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Driftless walk with σ11 = σ22 = 1 km²/hr: exponential lengths of mean
/// `len` and E(η) = E(ξ²)/2.
fn bm_surrogate(len: f64) -> MobilityParams {
    let e_xi2 = 2.0 * len * len;
    MobilityParams::new(0.0, len, e_xi2 / 2.0, 0.0).unwrap()
}

/// Same diffusion with fixed-length jumps and fixed dwell; the overshoot
/// shrinks with `len`.
fn fine_bm_surrogate(len: f64) -> MobilityParams {
    MobilityParams::with_dists(0.0, len, 0.0, len * len / 2.0, 0.0, LengthDist::Deterministic, TimeDist::Deterministic)
        .unwrap()
}

#[test]
fn dwell_mean_law_of_large_numbers() {
    let p = MobilityParams::reference(1.0);
    let s = DisplacementSampler::new(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1_000_000;
    let mean = (0..n).map(|_| s.dwell(&mut rng)).sum::<f64>() / n as f64;
    let sd = (p.var_time / n as f64).sqrt();
    assert!((mean - p.mean_time).abs() < 4.0 * sd, "{mean} vs {}", p.mean_time);
}

#[test]
fn directed_motion_has_no_spread() {
    // At k = 1e6, P(|Θ| > 1e-5) = e^{-10} is not zero, so 1e6 draws cannot
    // all be inside 1e-5. Check the tail frequency and then the limit itself.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = DisplacementSampler::new(&MobilityParams::reference(1e6)).unwrap();
    let n = 1_000_000;
    let hits = (0..n).filter(|_| s.theta(&mut rng).abs() > 1e-5).count() as f64;
    let p = (-10f64).exp();
    assert!((hits / n as f64 - p).abs() < 4.0 * (p / n as f64).sqrt(), "{hits}");
    let s = DisplacementSampler::new(&MobilityParams::reference(1e8)).unwrap();
    assert!((0..n).all(|_| s.theta(&mut rng).abs() < 1e-5));
}

#[test]
fn direction_variance_against_quadrature() {
    let k = 1.0;
    let s = DisplacementSampler::new(&MobilityParams::reference(k)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 1_000_000;
    let (mut m2, mut m4) = (0.0, 0.0);
    for _ in 0..n {
        let t2 = s.theta(&mut rng).powi(2);
        m2 += t2;
        m4 += t2 * t2;
    }
    let (m2, m4) = (m2 / n as f64, m4 / n as f64);
    let sd = ((m4 - m2 * m2) / n as f64).sqrt();
    let v = direction_moments(k).unwrap().var_theta;
    assert!((m2 - v).abs() < 4.0 * sd, "{m2} vs {v}");
}

#[test]
fn immediate_exit_next_to_the_boundary() {
    let r = 1.0;
    let s = DisplacementSampler::new(&MobilityParams::reference(1e8)).unwrap();
    let cfg = SimConfig::new(1000, 6);
    for i in 0..cfg.n_trials {
        let mut rng = cfg.trial_rng(i);
        match first_exit([r - 1e-12, 0.0], r, &s, &mut rng, 10).unwrap() {
            ExitOutcome::Exited(e) => assert_eq!(e.n_steps, 1),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn bm_surrogate_optional_stopping() {
    // ‖X_n‖² - n E(ξ²) is a martingale, so E τ = E‖X_τ‖² E(η) / E(ξ²).
    let p = bm_surrogate(0.02);
    let st = exit_statistics([0.0, 0.0], 1.0, &p, &SimConfig::new(100_000, 7)).unwrap();
    assert_eq!(st.censored, 0);
    let oracle = st.mean_exit_radius_sq * p.mean_time / p.second_moment_len;
    assert!(st.tau.covers(oracle) || (st.tau.mean - oracle).abs() < 1e-3 * oracle, "{:?} vs {oracle}", st.tau);
    // The remaining gap to 1/2 is the overshoot.
    assert!((st.tau.mean - 0.5 * st.mean_exit_radius_sq).abs() < 3.0 * st.tau.half_width_95);
}

#[test]
fn fine_step_bm_surrogate_matches_exact_interval() {
    let est = estimate_t([0.0, 0.0], 1.0, 0.0, &fine_bm_surrogate(0.005), &SimConfig::new(10_000, 8)).unwrap();
    assert!(est.estimate.covers(0.5), "{:?}", est.estimate);
}

#[test]
#[ignore = "overshoot of exponential jumps biases the exit time by about 4%, far outside the CI"]
fn bm_surrogate_exit_time_half() {
    let est = estimate_t([0.0, 0.0], 1.0, 0.0, &bm_surrogate(0.02), &SimConfig::new(100_000, 9)).unwrap();
    assert!(est.estimate.covers(0.5), "{:?}", est.estimate);
}

#[test]
fn strong_drift_crossing_count() {
    // Directed exponential jumps: N - 1 counts renewals in a path of length
    // L, so E N = 1 + L / E(ξ) and E τ = E N E(η).
    let p = MobilityParams::reference(1e8);
    let start = -1.0 + 1e-9;
    let st = exit_statistics([start, 0.0], 1.0, &p, &SimConfig::new(100_000, 10)).unwrap();
    let n = 1.0 + (1.0 - start) / p.mean_len;
    assert!(st.steps.covers(n), "{:?} vs {n}", st.steps);
    assert!(st.tau.covers(n * p.mean_time), "{:?} vs {}", st.tau, n * p.mean_time);
}

#[test]
#[ignore = "the final jump overshoots by E(ξ), a 1% bias against a 0.06% CI"]
fn strong_drift_exit_time_two_r_over_mu() {
    let p = MobilityParams::reference(1e6);
    let mu1 = compute_diffusion(&p).unwrap().mu1();
    let st = exit_statistics([-1.0 + 1e-9, 0.0], 1.0, &p, &SimConfig::new(100_000, 10)).unwrap();
    assert!(st.tau.covers(2.0 / mu1), "{:?} vs {}", st.tau, 2.0 / mu1);
}

#[test]
fn fast_calls_dominate() {
    let lambda = 1e6;
    let est = estimate_t([0.0, 0.0], 1.0, lambda, &MobilityParams::reference(1.0), &SimConfig::new(20_000, 11)).unwrap();
    assert!(est.estimate.covers(1.0 / lambda), "{:?}", est.estimate);
}

#[test]
fn monte_carlo_against_finite_differences() {
    let (k, lambda) = (0.5, 2.0);
    let p = MobilityParams::reference(k);
    let est = estimate_t([0.0, 0.0], 1.0, lambda, &p, &SimConfig::new(100_000, 12)).unwrap();
    let grid = Arc::new(DiscGrid::new(1.0, 96).unwrap());
    let t = solve_mean_interval(&compute_diffusion(&p).unwrap(), 1.0, lambda, &grid).unwrap().at(0.0, 0.0);
    let gap = (est.estimate.mean - t).abs();
    assert!(gap <= (0.03 * t).max(est.estimate.half_width_95), "MC {:?} vs PDE {t}", est.estimate);
}

#[test]
fn density_at_time_zero() {
    let x = [0.3, -0.2];
    let h = empirical_density(x, 0.0, 1.0, &MobilityParams::reference(1.0), &SimConfig::new(1000, 13), 10).unwrap();
    assert_eq!(h.survival, 1.0);
    let b = h.bin_of(x).unwrap();
    assert!((h.mass[b] - 1.0).abs() < 1e-12);
    assert!((h.mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn survival_is_nonincreasing() {
    let p = MobilityParams::reference(2.0);
    let cfg = SimConfig::new(5000, 14);
    let s: Vec<f64> = [0.0, 0.05, 0.1, 0.2, 0.4, 0.8]
        .iter()
        .map(|&t| empirical_density([0.0, 0.0], t, 1.0, &p, &cfg, 4).unwrap().survival)
        .collect();
    assert!(s.windows(2).all(|w| w[1] <= w[0]), "{s:?}");
}

#[test]
fn density_against_forward_equation() {
    // 9 bins and 50 nodes per radius keep every node off the bin edges.
    let (t, bins) = (0.1, 9);
    let mc = empirical_density([0.0, 0.0], t, 1.0, &bm_surrogate(0.02), &SimConfig::new(100_000, 15), bins).unwrap();
    let grid = Arc::new(DiscGrid::new(1.0, 50).unwrap());
    let fwd = solve_forward(&DiffusionParams::brownian(1.0), [0.0, 0.0], 1.0, &grid, &TimeGrid::new(t, 400).unwrap(), &[t])
        .unwrap();
    let pde = DensityHistogram::from_field(&fwd.densities[0], bins);
    let l1 = mc.l1_distance(&pde);
    assert!(l1 < 0.05, "L1 = {l1}");
}

#[test]
fn same_seed_same_estimate() {
    let p = MobilityParams::reference(3.0);
    let cfg = SimConfig::new(2000, 16);
    let a = estimate_t([0.1, 0.0], 1.0, 0.2, &p, &cfg).unwrap();
    let b = estimate_t([0.1, 0.0], 1.0, 0.2, &p, &cfg).unwrap();
    assert_eq!(a, b);
}

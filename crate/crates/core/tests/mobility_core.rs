use std::f64::consts::PI;

use locman::ctrw::DisplacementSampler;
use locman::mobility::{direction_moments, direction_pdf, global_drift};
use locman::{compute_diffusion, MobilityParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn pdf_limits_and_symmetry() {
    for th in [-3.0, -0.5, 0.0, 1.2, 3.1] {
        assert!((direction_pdf(1e-9, th).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-8);
    }
    assert_eq!(direction_pdf(1.0, 0.7).unwrap(), direction_pdf(1.0, -0.7).unwrap());
    let peak = 1.0 / (2.0 * (1.0 - (-PI).exp()));
    assert!((direction_pdf(1.0, 0.0).unwrap() - peak).abs() < 1e-12);
    assert!((peak - 0.522582).abs() < 1e-6);
}

#[test]
fn moment_limits() {
    let uniform = direction_moments(0.0).unwrap();
    assert!(uniform.e_cos.abs() < 1e-12);
    assert!((uniform.var_theta - PI * PI / 3.0).abs() < 1e-9);
    let directed = direction_moments(1e6).unwrap();
    assert!((directed.e_cos - 1.0).abs() < 1e-9);
    assert!(directed.var_theta < 1e-9);
}

#[test]
fn e_cos_against_sampling() {
    let k = 2.0;
    let m = direction_moments(k).unwrap();
    let s = DisplacementSampler::new(&MobilityParams::reference(k)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let c = s.theta(&mut rng).cos();
        sum += c;
        sum_sq += c * c;
    }
    let mean = sum / n as f64;
    let sd = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - m.e_cos).abs() < 4.0 * sd, "{mean} vs {}", m.e_cos);
}

#[test]
fn diffusion_limits() {
    let p = MobilityParams::reference(0.0);
    let d = compute_diffusion(&p).unwrap();
    let s = p.second_moment_len / (2.0 * p.mean_time);
    assert!(d.mu1().abs() < 1e-12);
    assert!((d.sigma11() - s).abs() < 1e-9 * s && (d.sigma22() - s).abs() < 1e-9 * s);

    let strong = compute_diffusion(&MobilityParams::reference(1e6)).unwrap();
    assert!((strong.mu1() - 9.0).abs() < 1e-6);
    assert!((strong.sigma11() - 0.1828).abs() < 1e-3, "{}", strong.sigma11());
    let gamma = global_drift(&strong, 1.0).unwrap();
    assert!((gamma - 98.5).abs() < 0.5, "{gamma}");

    for k in [0.3, 2.0, 40.0] {
        let d = compute_diffusion(&MobilityParams::reference(k)).unwrap();
        assert!(d.sigma[0][1].abs() < 1e-9 && d.sigma[1][0].abs() < 1e-9 && d.mu[1].abs() < 1e-9);
        assert!(d.is_psd(1e-12));
    }
}

#[test]
fn global_drift_limits() {
    assert_eq!(global_drift(&locman::DiffusionParams::brownian(1.0), 1.0).unwrap(), 0.0);
    // Quadrature leaves rounding-level drift at k = 0.
    assert!(global_drift(&compute_diffusion(&MobilityParams::reference(0.0)).unwrap(), 1.0).unwrap() < 1e-12);
    let small = global_drift(&compute_diffusion(&MobilityParams::reference(1e-4)).unwrap(), 1.0).unwrap();
    let large = global_drift(&compute_diffusion(&MobilityParams::reference(1e4)).unwrap(), 1.0).unwrap();
    assert!(small < 0.05 && large > 50.0, "{small} {large}");
}

#[test]
fn rejects_bad_parameters() {
    assert!(MobilityParams::new(-1.0, 0.02, 0.01, 0.0).is_err());
    assert!(MobilityParams::new(1.0, 0.0, 0.01, 0.0).is_err());
    assert!(MobilityParams::new(1.0, 0.02, 0.0, 0.0).is_err());
    assert!(MobilityParams::new(1.0, 0.02, 0.01, -1.0).is_err());
    let p = MobilityParams::reference(1.0);
    assert_eq!(p.second_moment_len, p.var_len + p.mean_len * p.mean_len);
}

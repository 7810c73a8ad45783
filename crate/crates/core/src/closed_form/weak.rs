//! Weak drift: two-term Galerkin approximation `T = A φ1 + B φ2` with
//! `φ1 = R² - x² - y²` and `φ2 = φ1 (x + y)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mobility::{global_drift, DiffusionParams};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakDriftCoeffs {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

/// Integral over the disc of radius `r`, exact for polynomials up to
/// degree 19 (Gauss-Legendre in radius, trapezoid in angle).
pub fn disc_integral<F: Fn(f64, f64) -> f64>(f: F, r: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(10);
    let m = 40;
    let mut s = 0.0;
    for (u, w) in nodes.iter().zip(&weights) {
        let rho = 0.5 * r * (u + 1.0);
        let mut ring = 0.0;
        for k in 0..m {
            let t = 2.0 * PI * k as f64 / m as f64;
            ring += f(rho * t.cos(), rho * t.sin());
        }
        s += w * rho * ring * (2.0 * PI / m as f64);
    }
    s * 0.5 * r
}

/// Assembles and solves the 2×2 Galerkin system
/// `∬ φi L φj · (A, B) = -∬ φi` for `L = σ11/2 ∂xx + σ22/2 ∂yy + μ1 ∂x`.
pub fn weak_drift_coeffs(diff: &DiffusionParams, r: f64) -> Result<WeakDriftCoeffs> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    let (s11, s22, m1) = (diff.sigma11(), diff.sigma22(), diff.mu1());
    let r2 = r * r;
    let phi1 = |x: f64, y: f64| r2 - x * x - y * y;
    let phi2 = |x: f64, y: f64| phi1(x, y) * (x + y);
    let l_phi1 = |x: f64, _y: f64| -s11 - s22 + m1 * (-2.0 * x);
    let l_phi2 = |x: f64, y: f64| {
        let xx = -6.0 * x - 2.0 * y;
        let yy = -2.0 * x - 6.0 * y;
        let dx = -2.0 * x * (x + y) + phi1(x, y);
        0.5 * s11 * xx + 0.5 * s22 * yy + m1 * dx
    };
    let m11 = disc_integral(|x, y| phi1(x, y) * l_phi1(x, y), r);
    let m12 = disc_integral(|x, y| phi1(x, y) * l_phi2(x, y), r);
    let m21 = disc_integral(|x, y| phi2(x, y) * l_phi1(x, y), r);
    let m22 = disc_integral(|x, y| phi2(x, y) * l_phi2(x, y), r);
    let b1 = -disc_integral(phi1, r);
    let b2 = -disc_integral(phi2, r);
    let det = m11 * m22 - m12 * m21;
    let scale = (m11.abs() + m12.abs()) * (m21.abs() + m22.abs());
    if !(det.abs() > 1e-14 * scale) {
        return Err(Error::DegenerateDiffusion(format!("weak-drift Galerkin system is singular (det {det:e})")));
    }
    Ok(WeakDriftCoeffs {
        a: (b1 * m22 - m12 * b2) / det,
        b: (m11 * b2 - m21 * b1) / det,
        r,
    })
}

/// Closed forms of the same system:
/// `A = 6S / ((μ1 R)² + 6 S²)`, `B = -μ1 A / (2S)` with `S = σ11 + σ22`.
pub fn weak_drift_coeffs_closed(diff: &DiffusionParams, r: f64) -> WeakDriftCoeffs {
    let s = diff.trace();
    let m = diff.mu1();
    let a = 6.0 * s / ((m * r).powi(2) + 6.0 * s * s);
    WeakDriftCoeffs { a, b: -m * a / (2.0 * s), r }
}

impl WeakDriftCoeffs {
    pub fn t(&self, x: f64, y: f64) -> f64 {
        let phi1 = self.r * self.r - x * x - y * y;
        if phi1 <= 0.0 {
            return 0.0;
        }
        phi1 * (self.a + self.b * (x + y))
    }

    /// Maximiser of `T(x, 0)`: root of `-3B x² - 2A x + B R² = 0` in `(-R, R)`.
    pub fn x_opt(&self) -> f64 {
        let (a, b, r) = (self.a, self.b, self.r);
        if b == 0.0 {
            return 0.0;
        }
        // Cancellation-free form of (-A + sqrt(A² + 3B²R²)) / (3B).
        b * r * r / (a + (a * a + 3.0 * b * b * r * r).sqrt())
    }
}

/// `T(x, y)` under the weak-drift approximation (λ = 0).
pub fn weak_drift_t(diff: &DiffusionParams, r: f64, x: f64, y: f64) -> Result<f64> {
    let gamma = global_drift(diff, r)?;
    if gamma > 1.0 {
        log::warn!("weak-drift approximation used at global drift {gamma:.3} > 1");
    }
    Ok(weak_drift_coeffs(diff, r)?.t(x, y))
}

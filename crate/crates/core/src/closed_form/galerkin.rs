//! First-order Galerkin solution `T = C g` with trial function
//! `g = (R² - x² - y²) / (x + a)`, valid for any drift strength.
//!
//! `C = -πR² / (σ11/2 C11 + σ22/2 C22 - λ C0)` where `C11 = ∬ g_xx`,
//! `C22 = ∬ g_yy` and `C0 = ∬ g`. The drift term `∬ μ1 g_x` vanishes
//! because g is zero on the circle, so C does not see μ1 directly; the
//! drift only enters through the offset parameter `a = R E(ξ) / (E(η) μ1)`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::mobility::DiffusionParams;
use crate::quadrature::{integrate_with_breaks, QuadratureOptions};

/// Relative gap kept between `a` and `R`.
pub const A_CLAMP: f64 = 1e-6;
/// Offset parameter used when there is no drift.
pub const A_MAX_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalerkinSolution {
    pub a: f64,
    pub c: f64,
    pub c11: f64,
    pub c22: f64,
    pub c0: f64,
    pub r: f64,
    pub lambda: f64,
}

/// `a = R / E(cos Θ)`, clamped to at least `R (1 + 1e-6)`.
pub fn offset_parameter(diff: &DiffusionParams, r: f64) -> Result<f64> {
    let (mu1, speed) = (diff.mu1(), diff.mean_speed);
    if mu1 < 0.0 {
        return Err(Error::Domain(format!("drift must point along +x, got mu1 = {mu1}")));
    }
    if mu1 == 0.0 || speed == 0.0 {
        return Ok(A_MAX_FACTOR * r);
    }
    let a = (speed * r / mu1).min(A_MAX_FACTOR * r);
    Ok(clamp_a(a, r))
}

fn clamp_a(a: f64, r: f64) -> f64 {
    let floor = r * (1.0 + A_CLAMP);
    if a < floor {
        if a < r * (1.0 - 1e-12) {
            log::warn!("offset parameter a = {a} below R = {r}; clamped to R(1 + {A_CLAMP:e})");
        }
        floor
    } else {
        a
    }
}

/// Maximiser of `g(x, 0)`: `-a + sqrt(a² - R²)` in its subtraction-free form.
pub fn optimal_offset_for_a(a: f64, r: f64) -> f64 {
    let d = (a * a - r * r).max(0.0).sqrt();
    -r * r / (a + d)
}

/// Optimal starting offset along the drift axis.
pub fn optimal_offset(diff: &DiffusionParams, r: f64) -> Result<f64> {
    Ok(optimal_offset_for_a(offset_parameter(diff, r)?, r))
}

/// `ln((a + R cos φ) / (a - R cos φ))` with the denominator written as
/// `((a² - R²) + R² sin² φ) / (a + R cos φ)`, so a → R loses no digits.
fn log_ratio(a: f64, r: f64, phi: f64) -> f64 {
    let s = r * phi.cos();
    let z = s / a;
    if z < 0.5 {
        2.0 * z.atanh()
    } else {
        let den = (a * a - r * r) + (r * phi.sin()).powi(2);
        ((a + s) * (a + s) / den).ln()
    }
}

/// `(z² - 1) 2 atanh(z) + 2z`, by series for small z where the two terms
/// cancel.
fn c0_kernel(z: f64) -> f64 {
    if z < 0.2 {
        let z2 = z * z;
        let mut term = z * z2;
        let mut sum = 0.0;
        for n in 1..40 {
            let nf = n as f64;
            let add = 4.0 * term / (4.0 * nf * nf - 1.0);
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
            term *= z2;
        }
        sum
    } else {
        (z * z - 1.0) * 2.0 * z.atanh() + 2.0 * z
    }
}

fn phi_breaks(a: f64, r: f64) -> Vec<f64> {
    // Integrands peak at φ = 0 with width ~ sqrt(a² - R²)/R when a ≈ R.
    let eps = (a * a - r * r).max(0.0).sqrt() / r;
    let mut pts = vec![0.0];
    for m in [1.0, 10.0, 100.0, 1000.0] {
        let p = m * eps;
        if p < 0.5 {
            pts.push(p);
        }
    }
    pts.push(FRAC_PI_2);
    pts
}

/// The three trial-function integrals `(C11, C22, C0)`, each an integral
/// over y of a closed-form inner x-integral, with `y = R sin φ`.
pub fn trial_integrals(a: f64, r: f64) -> Result<(f64, f64, f64)> {
    if !(a > r) {
        return Err(Error::Domain(format!("need a > R, got a = {a}, R = {r}")));
    }
    let pts = phi_breaks(a, r);
    let opts = QuadratureOptions { abs_tol: 0.0, rel_tol: 1e-11, max_panels: 4000 };
    let jac = |phi: f64| r * phi.cos();
    // Halves over φ ∈ [0, π/2] doubled by symmetry in y.
    let c11 = -2.0
        * 2.0
        * a
        * integrate_with_breaks(
            |phi| {
                let s = r * phi.cos();
                let den = (a * a - r * r) + (r * phi.sin()).powi(2);
                2.0 * s / den * jac(phi)
            },
            &pts,
            opts,
        )?
        .value;
    let c22 = -2.0 * 2.0 * integrate_with_breaks(|phi| log_ratio(a, r, phi) * jac(phi), &pts, opts)?.value;
    let c0 = 2.0
        * integrate_with_breaks(
            |phi| {
                let s = r * phi.cos();
                let z = s / a;
                let v = if z < 0.5 {
                    a * a * c0_kernel(z)
                } else {
                    let den = (a * a - r * r) + (r * phi.sin()).powi(2);
                    -den * log_ratio(a, r, phi) + 2.0 * a * s
                };
                v * jac(phi)
            },
            &pts,
            opts,
        )?
        .value;
    Ok((c11, c22, c0))
}

/// `C11` in closed form: `-4πa (a / sqrt(a² - R²) - 1)`.
pub fn c11_closed(a: f64, r: f64) -> f64 {
    let d = (a * a - r * r).sqrt();
    // a/d - 1 = (a - d)/d = R² / (d (a + d))
    -4.0 * PI * a * r * r / (d * (a + d))
}

/// `∬ g_x` by nested adaptive quadrature; zero up to quadrature error.
pub fn drift_integral(a: f64, r: f64) -> Result<f64> {
    let opts = QuadratureOptions::abs(1e-12);
    let outer = integrate_with_breaks(
        |y| {
            let s2 = (r * r - y * y).max(0.0);
            let s = s2.sqrt();
            if s == 0.0 {
                return 0.0;
            }
            integrate_with_breaks(|x| -(x * x + 2.0 * a * x + s2) / ((x + a) * (x + a)), &[-s, s], opts)
                .map(|v| v.value)
                .unwrap_or(f64::NAN)
        },
        &[-r, 0.0, r],
        opts,
    )?;
    if outer.value.is_nan() {
        return Err(Error::Numerical { what: "drift integral", achieved: f64::NAN, tolerance: 1e-12 });
    }
    Ok(outer.value)
}

impl GalerkinSolution {
    /// Solution for an explicit offset parameter `a`.
    pub fn with_a(sigma11: f64, sigma22: f64, r: f64, lambda: f64, a: f64) -> Result<Self> {
        if !(r > 0.0) || !(lambda >= 0.0) {
            return Err(Error::Domain(format!("need R > 0 and lambda >= 0, got {r}, {lambda}")));
        }
        let a = clamp_a(a, r);
        let (c11, c22, c0) = trial_integrals(a, r)?;
        let den = 0.5 * sigma11 * c11 + 0.5 * sigma22 * c22 - lambda * c0;
        if !(den < 0.0) {
            return Err(Error::DegenerateDiffusion(format!(
                "Galerkin denominator {den:e} is not negative"
            )));
        }
        let c = -PI * r * r / den;
        Ok(Self { a, c, c11, c22, c0, r, lambda })
    }

    pub fn g(&self, x: f64, y: f64) -> f64 {
        let phi = self.r * self.r - x * x - y * y;
        if phi <= 0.0 {
            return 0.0;
        }
        phi / (x + self.a)
    }

    pub fn t(&self, x: f64, y: f64) -> f64 {
        self.c * self.g(x, y)
    }

    pub fn x_opt(&self) -> f64 {
        optimal_offset_for_a(self.a, self.r)
    }

    pub fn t_opt(&self) -> f64 {
        self.t(self.x_opt(), 0.0)
    }

    /// `T_x(x, 0) = -C (x² + 2ax + R²) / (x + a)²`.
    pub fn t_x(&self, x: f64) -> f64 {
        -self.c * (x * x + 2.0 * self.a * x + self.r * self.r) / (x + self.a).powi(2)
    }

    /// `T_xx(x, 0) = 2C (R² - a²) / (x + a)³`.
    pub fn t_xx(&self, x: f64) -> f64 {
        2.0 * self.c * (self.r * self.r - self.a * self.a) / (x + self.a).powi(3)
    }
}

/// Galerkin solution with `a` taken from the drift.
pub fn galerkin_t(diff: &DiffusionParams, r: f64, lambda: f64) -> Result<GalerkinSolution> {
    let a = offset_parameter(diff, r)?;
    GalerkinSolution::with_a(diff.sigma11(), diff.sigma22(), r, lambda, a)
}

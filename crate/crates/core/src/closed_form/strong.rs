//! Strong drift: with σ22 negligible, each chord `y = const` carries the
//! one-dimensional problem `σ11/2 T_xx + μ1 T_x + 1 = 0`, `T(±s) = 0`,
//! `s = sqrt(R² - y²)`.
//!
//! Writing `β = 2μ1/σ11`, the chord solution is
//! `T = C1(y) + C2(y) e^{-βx} - x/μ1 + σ11/(2μ1²)` with
//! `C2 = 2s / (μ1 (e^{-βs} - e^{βs}))` and
//! `C1 = -C2 e^{-βs} + s/μ1 - σ11/(2μ1²)`. Both coefficients over- or
//! underflow once βs is a few hundred, so values are formed from ratios of
//! exponentials with non-positive arguments.

use crate::error::{Error, Result};
use crate::mobility::{global_drift, DiffusionParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongDriftSolution {
    pub mu1: f64,
    pub sigma11: f64,
    pub r: f64,
}

impl StrongDriftSolution {
    pub fn new(diff: &DiffusionParams, r: f64) -> Result<Self> {
        let (mu1, sigma11) = (diff.mu1(), diff.sigma11());
        if !(mu1 > 0.0) || !(sigma11 > 0.0) || !(r > 0.0) {
            return Err(Error::DegenerateDiffusion(format!(
                "strong-drift form needs mu1 > 0, sigma11 > 0, R > 0 (got {mu1}, {sigma11}, {r})"
            )));
        }
        Ok(Self { mu1, sigma11, r })
    }

    fn beta(&self) -> f64 {
        2.0 * self.mu1 / self.sigma11
    }

    fn half_chord(&self, y: f64) -> f64 {
        (self.r * self.r - y * y).max(0.0).sqrt()
    }

    /// `ln(-C2(y))`; C2 is negative for μ1 > 0.
    pub fn ln_neg_c2(&self, y: f64) -> f64 {
        let (b, s) = (self.beta(), self.half_chord(y));
        // -C2 = 2s e^{-βs} / (μ1 (1 - e^{-2βs})).
        (2.0 * s / self.mu1).ln() - b * s - (-(-2.0 * b * s).exp_m1()).ln()
    }

    pub fn c1(&self, y: f64) -> f64 {
        let (b, s) = (self.beta(), self.half_chord(y));
        let neg_c2_e = (self.ln_neg_c2(y) - b * s).exp();
        neg_c2_e + s / self.mu1 - self.sigma11 / (2.0 * self.mu1 * self.mu1)
    }

    pub fn t(&self, x: f64, y: f64) -> f64 {
        let s = self.half_chord(y);
        if x <= -s || x >= s || s == 0.0 {
            return 0.0;
        }
        let b = self.beta();
        let ratio = ((-b * (x + s)).exp() - (-2.0 * b * s).exp()) / (-(-2.0 * b * s).exp_m1());
        ((s - x) / self.mu1 - 2.0 * s / self.mu1 * ratio).max(0.0)
    }

    /// Maximiser of `T(x, y)` along the chord at height `y`.
    pub fn x_opt_at(&self, y: f64) -> f64 {
        let (b, s) = (self.beta(), self.half_chord(y));
        let z = 2.0 * b * s;
        if z < 1e-8 {
            return 0.0;
        }
        -s - (-(-z).exp_m1() / z).ln() / b
    }

    pub fn x_opt(&self) -> f64 {
        self.x_opt_at(0.0)
    }
}

/// Strong-drift `T(x, y)` (λ = 0).
pub fn strong_drift_t(diff: &DiffusionParams, r: f64, x: f64, y: f64) -> Result<f64> {
    let gamma = global_drift(diff, r)?;
    if gamma < 10.0 {
        log::warn!("strong-drift approximation used at global drift {gamma:.3} < 10");
    }
    Ok(StrongDriftSolution::new(diff, r)?.t(x, y))
}

//! CTRW mobility parameters and their diffusion limit.
//!
//! Units throughout: km, hours. Config files carry SI values (m, s, s²),
//! the conversion happens in [`MobilityParams::from_si`].

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureOptions};

pub const SECONDS_PER_HOUR: f64 = 3600.0;

/// Distribution of the displacement length ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthDist {
    /// Exponential; requires `var_len == mean_len²`.
    Exponential,
    /// Gamma matched to mean and variance.
    Gamma,
    /// Every jump has length `mean_len`; requires `var_len == 0`.
    Deterministic,
}

/// Distribution of the dwell time η.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeDist {
    /// Gamma matched to mean and variance (deterministic when the variance is 0).
    Gamma,
    /// Exponential; requires `var_time == mean_time²`.
    Exponential,
    Deterministic,
}

/// Family of the direction density f_Θ(k, θ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionFamily {
    /// Laplace density folded onto the circle: `k e^{-k|θ|} / (2(1 - e^{-kπ}))`.
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityParams {
    pub k: f64,
    pub mean_len: f64,
    pub var_len: f64,
    pub second_moment_len: f64,
    pub mean_time: f64,
    pub var_time: f64,
    pub length_dist: LengthDist,
    pub time_dist: TimeDist,
    pub direction_family: DirectionFamily,
}

impl MobilityParams {
    /// Exponential lengths, gamma dwell times, Laplace directions.
    pub fn new(k: f64, mean_len: f64, mean_time: f64, var_time: f64) -> Result<Self> {
        Self::with_dists(
            k,
            mean_len,
            mean_len * mean_len,
            mean_time,
            var_time,
            LengthDist::Exponential,
            TimeDist::Gamma,
        )
    }

    pub fn with_dists(
        k: f64,
        mean_len: f64,
        var_len: f64,
        mean_time: f64,
        var_time: f64,
        length_dist: LengthDist,
        time_dist: TimeDist,
    ) -> Result<Self> {
        let p = Self {
            k,
            mean_len,
            var_len,
            second_moment_len: var_len + mean_len * mean_len,
            mean_time,
            var_time,
            length_dist,
            time_dist,
            direction_family: DirectionFamily::Laplace,
        };
        p.validate()?;
        Ok(p)
    }

    /// SI inputs: mean length in m, dwell mean in s, dwell variance in s².
    pub fn from_si(k: f64, mean_len_m: f64, e_eta_s: f64, var_eta_s2: f64) -> Result<Self> {
        Self::new(
            k,
            mean_len_m / 1000.0,
            e_eta_s / SECONDS_PER_HOUR,
            var_eta_s2 / (SECONDS_PER_HOUR * SECONDS_PER_HOUR),
        )
    }

    /// Default scenario: 20 m mean jumps, 8 s mean dwell, 1 s² dwell variance.
    pub fn reference(k: f64) -> Self {
        Self::from_si(k, 20.0, 8.0, 1.0).expect("default parameters are valid")
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_var_time(mut self, var_time: f64) -> Result<Self> {
        self.var_time = var_time;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.k, self.mean_len, self.var_len, self.mean_time, self.var_time]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return domain("mobility parameters must be finite");
        }
        if self.k < 0.0 {
            return domain(format!("k must be >= 0, got {}", self.k));
        }
        if self.mean_len <= 0.0 {
            return domain(format!("mean_len must be > 0, got {}", self.mean_len));
        }
        if self.mean_time <= 0.0 {
            return domain(format!("mean_time must be > 0, got {}", self.mean_time));
        }
        if self.var_len < 0.0 || self.var_time < 0.0 {
            return domain("variances must be >= 0");
        }
        let tight = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300);
        match self.length_dist {
            LengthDist::Exponential if !tight(self.var_len, self.mean_len * self.mean_len) => {
                return domain("exponential lengths need var_len = mean_len^2")
            }
            LengthDist::Deterministic if self.var_len != 0.0 => {
                return domain("deterministic lengths need var_len = 0")
            }
            _ => {}
        }
        match self.time_dist {
            TimeDist::Exponential if !tight(self.var_time, self.mean_time * self.mean_time) => {
                return domain("exponential dwell times need var_time = mean_time^2")
            }
            TimeDist::Deterministic if self.var_time != 0.0 => {
                return domain("deterministic dwell times need var_time = 0")
            }
            _ => {}
        }
        Ok(())
    }
}

/// Moments of Θ consumed by the diffusion map and the paging plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionMoments {
    pub e_cos: f64,
    pub e_sin: f64,
    pub e_cos2: f64,
    pub e_sin2: f64,
    pub e_cos_sin: f64,
    pub var_theta: f64,
}

/// Drift (km/hr) and diffusion matrix (km²/hr) of the limiting process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub mu: [f64; 2],
    pub sigma: [[f64; 2]; 2],
    /// E(ξ)/E(η), km/hr. Only the Galerkin offset parameter uses it.
    pub mean_speed: f64,
    /// E(η) in hours, for converting intervals to jump counts.
    pub mean_dwell: f64,
}

impl DiffusionParams {
    /// Isotropic, driftless process with `sigma11 = sigma22 = s`.
    pub fn brownian(s: f64) -> Self {
        Self::axial(0.0, s, s)
    }

    /// Drift along +x, diagonal σ. `mean_speed` is set to `mu1` (a = R).
    pub fn axial(mu1: f64, sigma11: f64, sigma22: f64) -> Self {
        Self {
            mu: [mu1, 0.0],
            sigma: [[sigma11, 0.0], [0.0, sigma22]],
            mean_speed: mu1.abs(),
            mean_dwell: 1.0,
        }
    }

    pub fn mu1(&self) -> f64 {
        self.mu[0]
    }
    pub fn sigma11(&self) -> f64 {
        self.sigma[0][0]
    }
    pub fn sigma22(&self) -> f64 {
        self.sigma[1][1]
    }
    /// Trace σ11 + σ22.
    pub fn trace(&self) -> f64 {
        self.sigma[0][0] + self.sigma[1][1]
    }

    /// E(cos Θ) recovered as μ1 / (E(ξ)/E(η)); 0 when there is no motion.
    pub fn e_cos(&self) -> f64 {
        if self.mean_speed > 0.0 {
            self.mu[0] / self.mean_speed
        } else {
            0.0
        }
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        let [[a, b], [c, d]] = self.sigma;
        let sym = (b - c).abs() <= tol;
        let det = a * d - b * c;
        sym && a >= -tol && d >= -tol && det >= -tol * (a.abs() + d.abs()).max(1.0)
    }
}

/// Laplace direction density of the given family, in 1/rad.
pub fn direction_pdf(k: f64, theta: f64) -> Result<f64> {
    if !(k >= 0.0) || !k.is_finite() {
        return domain(format!("k must be finite and >= 0, got {k}"));
    }
    if !(theta.abs() <= PI) {
        return domain(format!("theta must lie in [-pi, pi], got {theta}"));
    }
    Ok(laplace_pdf(k, theta))
}

fn laplace_pdf(k: f64, theta: f64) -> f64 {
    if k == 0.0 {
        return 1.0 / (2.0 * PI);
    }
    // 1 - e^{-kπ} via expm1 so small k stays accurate.
    k * (-k * theta.abs()).exp() / (-2.0 * (-k * PI).exp_m1())
}

fn direction_breaks(k: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    if k > 0.0 {
        for s in [1.0, 10.0, 40.0] {
            let p = s / k;
            if p < PI {
                pts.push(p);
            }
        }
    }
    pts.push(PI);
    pts
}

/// Moments of an even density supported on `[-π, π]`, integrated over
/// `[0, π]` and doubled. `breaks` are extra points in `(0, π)`.
pub fn moments_of_even_density<F: Fn(f64) -> f64>(pdf: F, breaks: &[f64]) -> Result<DirectionMoments> {
    let mut pts: Vec<f64> = std::iter::once(0.0)
        .chain(breaks.iter().copied().filter(|&b| b > 0.0 && b < PI))
        .chain(std::iter::once(PI))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let opts = QuadratureOptions::abs(5e-11);
    let half = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(2.0 * integrate_with_breaks(|t| g(t) * pdf(t), &pts, opts)?.value)
    };
    let mass = half(&|_| 1.0)?;
    if (mass - 1.0).abs() > 1e-8 {
        return Err(Error::Numerical {
            what: "direction density normalisation",
            achieved: (mass - 1.0).abs(),
            tolerance: 1e-8,
        });
    }
    let e_cos = half(&|t| t.cos())?;
    // cos² and sin² share one integral so that they sum to 1 to rounding.
    let e_sin2 = half(&|t| t.sin().powi(2))?;
    let var_theta = half(&|t| t * t)?;
    Ok(DirectionMoments {
        e_cos,
        e_sin: 0.0,
        e_cos2: 1.0 - e_sin2,
        e_sin2,
        e_cos_sin: 0.0,
        var_theta,
    })
}

/// Moments of the Laplace direction density by adaptive quadrature.
///
/// Odd moments (E sin Θ, E cos Θ sin Θ) are zero by symmetry of the density
/// and are returned as exact zeros.
pub fn direction_moments(k: f64) -> Result<DirectionMoments> {
    if !(k >= 0.0) || !k.is_finite() {
        return domain(format!("k must be finite and >= 0, got {k}"));
    }
    moments_of_even_density(|t| laplace_pdf(k, t), &direction_breaks(k))
}

/// Oddness check used by the tests: ∫ sin Θ f and ∫ cos Θ sin Θ f over the
/// full circle, evaluated without exploiting symmetry.
pub fn odd_direction_moments(k: f64) -> Result<(f64, f64)> {
    let pos = direction_breaks(k);
    let mut pts: Vec<f64> = pos.iter().rev().map(|p| -p).collect();
    pts.extend(pos.iter().skip(1));
    let opts = QuadratureOptions::abs(1e-11);
    let s = integrate_with_breaks(|t| t.sin() * laplace_pdf(k, t), &pts, opts)?.value;
    let cs = integrate_with_breaks(|t| t.sin() * t.cos() * laplace_pdf(k, t), &pts, opts)?.value;
    Ok((s, cs))
}

/// Drift and diffusion matrix from jump statistics, with ξ, Θ, η independent.
pub fn compute_diffusion(params: &MobilityParams) -> Result<DiffusionParams> {
    params.validate()?;
    let m = direction_moments(params.k)?;
    Ok(diffusion_from_moments(params, &m))
}

pub fn diffusion_from_moments(params: &MobilityParams, m: &DirectionMoments) -> DiffusionParams {
    let e_xi = params.mean_len;
    let e_xi2 = params.second_moment_len;
    let e_eta = params.mean_time;
    let mean = [e_xi * m.e_cos, e_xi * m.e_sin];
    let cov = [
        [e_xi2 * m.e_cos2 - mean[0] * mean[0], e_xi2 * m.e_cos_sin - mean[0] * mean[1]],
        [e_xi2 * m.e_cos_sin - mean[1] * mean[0], e_xi2 * m.e_sin2 - mean[1] * mean[1]],
    ];
    let mut sigma = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            sigma[i][j] =
                (cov[i][j] * e_eta * e_eta + params.var_time * mean[i] * mean[j]) / e_eta.powi(3);
        }
    }
    DiffusionParams {
        mu: [mean[0] / e_eta, mean[1] / e_eta],
        sigma,
        mean_speed: e_xi / e_eta,
        mean_dwell: e_eta,
    }
}

/// Which end of the k range a limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftLimit {
    /// k → 0: uniform directions.
    Weak,
    /// k → ∞: every jump along the preferred direction.
    Strong,
}

/// Closed-form limits of the diffusion map.
pub fn diffusion_limit(params: &MobilityParams, limit: DriftLimit) -> DiffusionParams {
    let e_eta = params.mean_time;
    let mut d = DiffusionParams {
        mu: [0.0, 0.0],
        sigma: [[0.0; 2]; 2],
        mean_speed: params.mean_len / e_eta,
        mean_dwell: e_eta,
    };
    match limit {
        DriftLimit::Weak => {
            let s = params.second_moment_len / (2.0 * e_eta);
            d.sigma = [[s, 0.0], [0.0, s]];
        }
        DriftLimit::Strong => {
            d.mu[0] = params.mean_len / e_eta;
            d.sigma[0][0] = (params.var_len * e_eta * e_eta + params.var_time * params.mean_len.powi(2))
                / e_eta.powi(3);
        }
    }
    d
}

/// Global drift γ = 2 μ1 R / σ11.
pub fn global_drift(diff: &DiffusionParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("R must be > 0, got {r}"));
    }
    if !(diff.sigma11() > 0.0) {
        return Err(Error::DegenerateDiffusion(format!(
            "sigma11 = {} leaves the global drift undefined",
            diff.sigma11()
        )));
    }
    Ok(2.0 * diff.mu1() * r / diff.sigma11())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdf_values() {
        assert!((direction_pdf(0.0, 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((direction_pdf(1e-12, 2.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-9);
        let v = direction_pdf(1.0, 0.0).unwrap();
        assert!((v - 1.0 / (2.0 * (1.0 - (-PI).exp()))).abs() < 1e-14);
        assert!((v - 0.522582).abs() < 1e-6);
        assert_eq!(direction_pdf(1.0, 0.7).unwrap(), direction_pdf(1.0, -0.7).unwrap());
    }

    #[test]
    fn pdf_rejects_bad_inputs() {
        assert!(direction_pdf(-1.0, 0.0).is_err());
        assert!(direction_pdf(1.0, 3.2).is_err());
        assert!(direction_pdf(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn uniform_moments() {
        let m = direction_moments(0.0).unwrap();
        assert!(m.e_cos.abs() < 1e-12);
        assert!((m.var_theta - PI * PI / 3.0).abs() < 1e-10);
        assert!((m.e_cos2 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn concentrated_moments() {
        let m = direction_moments(1e6).unwrap();
        assert!((m.e_cos - 1.0).abs() < 1e-9);
        assert!(m.var_theta < 1e-9);
        // Laplace variance 2/k² when the truncation is invisible.
        let m = direction_moments(50.0).unwrap();
        assert!((m.var_theta - 2.0 / 2500.0).abs() < 1e-10);
        // E cos Θ = k²/(k²+1) for an untruncated Laplace density.
        assert!((m.e_cos - 2500.0 / 2501.0).abs() < 1e-9);
    }

    #[test]
    fn odd_moments_vanish() {
        for k in [0.0, 0.3, 5.0, 1e4] {
            let (s, cs) = odd_direction_moments(k).unwrap();
            assert!(s.abs() < 1e-9 && cs.abs() < 1e-9, "k={k}: {s} {cs}");
        }
    }

    #[test]
    fn reference_values() {
        let d = compute_diffusion(&MobilityParams::reference(1e-9)).unwrap();
        assert!(d.mu1().abs() < 1e-6);
        assert!((d.sigma11() - 0.18).abs() < 1e-6);
        assert!((d.sigma22() - 0.18).abs() < 1e-6);

        let d = compute_diffusion(&MobilityParams::reference(1e6)).unwrap();
        assert!((d.mu1() - 9.0).abs() < 1e-4);
        assert!((d.sigma11() - 0.18281).abs() < 1e-4);
        let g = global_drift(&d, 1.0).unwrap();
        assert!((g - 98.5).abs() < 0.1, "gamma {g}");
    }

    #[test]
    fn si_conversion() {
        let p = MobilityParams::from_si(2.0, 20.0, 8.0, 1.0).unwrap();
        assert!((p.mean_len - 0.02).abs() < 1e-15);
        assert!((p.mean_time - 8.0 / 3600.0).abs() < 1e-15);
        assert!((p.var_time - 1.0 / 3600.0f64.powi(2)).abs() < 1e-20);
        assert!((p.second_moment_len - 8e-4).abs() < 1e-15);
    }

    #[test]
    fn invalid_params() {
        assert!(MobilityParams::new(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(MobilityParams::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(MobilityParams::new(-0.1, 1.0, 1.0, 0.0).is_err());
        assert!(MobilityParams::with_dists(1.0, 1.0, 0.5, 1.0, 0.0, LengthDist::Exponential, TimeDist::Gamma).is_err());
    }

    #[test]
    fn global_drift_errors() {
        let d = DiffusionParams::axial(1.0, 0.0, 1.0);
        assert!(matches!(global_drift(&d, 1.0), Err(Error::DegenerateDiffusion(_))));
        assert_eq!(global_drift(&DiffusionParams::brownian(1.0), 2.0).unwrap(), 0.0);
    }
}

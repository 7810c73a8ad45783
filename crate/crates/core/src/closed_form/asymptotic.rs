//! Leading-order optima in the weak- and strong-drift limits, with the
//! mean interval taken at λ = 0 and λ entering only through the blanket
//! paging cost `λ V π R²`.
//!
//! | regime | baseline | T(R)        | R_opt                   |
//! |--------|----------|-------------|-------------------------|
//! | weak   | either   | R² / S      | (S U / (λVπ))^{1/4}     |
//! | strong | optimal  | 2R / μ1     | (U μ1 / (4λVπ))^{1/3}   |
//! | strong | center   | R / μ1      | (U μ1 / (2λVπ))^{1/3}   |
//!
//! with `S = σ11 + σ22`.

use std::f64::consts::PI;

use super::strong::StrongDriftSolution;
use super::weak::weak_drift_coeffs_closed;
use crate::cost::{update_cost, CostParams};
use crate::error::{Error, Result};
use crate::mobility::{global_drift, DiffusionParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Start at the interval-maximising offset.
    OptimalOffset,
    /// Start at the centre of the area.
    Center,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeOptimum {
    pub regime: Regime,
    pub baseline: Baseline,
    pub x_opt: f64,
    pub t_opt: f64,
    pub r_opt: f64,
    /// `U / T + λ V π R²` at `R_opt`.
    pub c_min: f64,
    /// AM-GM lower-bound constant without its leading factor
    /// (`2 sqrt(SλUVπ)` weak, `cbrt((Uμ1)² λVπ / 16)` strong), reported for
    /// comparison with `c_min`.
    pub c_min_bound_constant: f64,
    /// `T / E(η)`: expected number of jumps per update interval.
    pub expected_jumps: f64,
    pub warnings: Vec<String>,
}

/// Leading-order mean interval at radius `r` for a regime and baseline.
pub fn leading_interval(diff: &DiffusionParams, r: f64, regime: Regime, baseline: Baseline) -> f64 {
    match (regime, baseline) {
        (Regime::Weak, _) => r * r / diff.trace(),
        (Regime::Strong, Baseline::OptimalOffset) => 2.0 * r / diff.mu1(),
        (Regime::Strong, Baseline::Center) => r / diff.mu1(),
    }
}

/// Leading-order interval with the regime chosen per radius as the smaller
/// of the two limits, which makes the transition continuous.
pub fn crossover_interval(diff: &DiffusionParams, r: f64, baseline: Baseline) -> f64 {
    let weak = leading_interval(diff, r, Regime::Weak, baseline);
    if diff.mu1() <= 0.0 {
        return weak;
    }
    weak.min(leading_interval(diff, r, Regime::Strong, baseline))
}

/// Offset maximising the regime's interval at radius `r`.
pub fn regime_offset(diff: &DiffusionParams, r: f64, regime: Regime) -> Result<f64> {
    match regime {
        Regime::Weak => Ok(weak_drift_coeffs_closed(diff, r).x_opt()),
        Regime::Strong => Ok(StrongDriftSolution::new(diff, r)?.x_opt()),
    }
}

pub fn asymptotic_optimum(
    diff: &DiffusionParams,
    costs: &CostParams,
    regime: Regime,
    baseline: Baseline,
) -> Result<RegimeOptimum> {
    costs.validate()?;
    let (u, v, lambda) = (costs.u, costs.v, costs.lambda);
    if !(lambda > 0.0) {
        return Err(Error::Domain("the asymptotic optimum needs lambda > 0".into()));
    }
    let s = diff.trace();
    let mu1 = diff.mu1();
    let (r_opt, bound) = match (regime, baseline) {
        (Regime::Weak, _) => ((s * u / (lambda * v * PI)).powf(0.25), 2.0 * (s * lambda * u * v * PI).sqrt()),
        (Regime::Strong, b) => {
            if !(mu1 > 0.0) {
                return Err(Error::DegenerateDiffusion("strong regime needs mu1 > 0".into()));
            }
            let factor = if b == Baseline::OptimalOffset { 4.0 } else { 2.0 };
            (
                (u * mu1 / (factor * lambda * v * PI)).cbrt(),
                ((u * mu1).powi(2) * lambda * v * PI / 16.0).cbrt(),
            )
        }
    };
    let t_opt = leading_interval(diff, r_opt, regime, baseline);
    let c_min = update_cost(t_opt, u)? + lambda * v * PI * r_opt * r_opt;
    let x_opt = match baseline {
        Baseline::Center => 0.0,
        Baseline::OptimalOffset => regime_offset(diff, r_opt, regime)?,
    };
    let mut warnings = Vec::new();
    if diff.sigma11() > 0.0 {
        let gamma = global_drift(diff, r_opt)?;
        match regime {
            Regime::Weak if gamma > 1.0 => {
                warnings.push(format!("weak regime requested but global drift at R_opt is {gamma:.3} > 1"))
            }
            Regime::Strong if gamma < 10.0 => {
                warnings.push(format!("strong regime requested but global drift at R_opt is {gamma:.3} < 10"))
            }
            _ => {}
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(RegimeOptimum {
        regime,
        baseline,
        x_opt,
        t_opt,
        r_opt,
        c_min,
        c_min_bound_constant: bound,
        expected_jumps: t_opt / diff.mean_dwell,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobility::{diffusion_limit, DriftLimit, MobilityParams};

    #[test]
    fn weak_reference_numbers() {
        let d = diffusion_limit(&MobilityParams::reference(0.0), DriftLimit::Weak);
        let o = asymptotic_optimum(&d, &CostParams::reference(), Regime::Weak, Baseline::OptimalOffset).unwrap();
        assert!((o.r_opt - 1.0346).abs() < 1e-3, "{}", o.r_opt);
        assert!((o.expected_jumps - 1338.0).abs() < 2.0, "{}", o.expected_jumps);
        assert!((o.c_min - o.c_min_bound_constant).abs() < 1e-9);
        assert!(o.x_opt.abs() < 1e-12);
    }

    #[test]
    fn strong_ratios() {
        let d = diffusion_limit(&MobilityParams::reference(0.0), DriftLimit::Strong);
        let c = CostParams::reference();
        let o = asymptotic_optimum(&d, &c, Regime::Strong, Baseline::OptimalOffset).unwrap();
        let z = asymptotic_optimum(&d, &c, Regime::Strong, Baseline::Center).unwrap();
        assert!((z.r_opt / o.r_opt - 2f64.cbrt()).abs() < 1e-12);
        assert!((z.c_min / o.c_min - 4f64.cbrt()).abs() < 1e-12);
        assert!((o.c_min / o.c_min_bound_constant - 3.0).abs() < 1e-12);
        assert!((o.r_opt - 1.9279).abs() < 1e-3);
        assert!(o.x_opt < -0.9 * o.r_opt);
    }
}

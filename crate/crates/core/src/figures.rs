//! Sweeps over the directionality factor k, emitted as CSV.
//!
//! The k grid is log-spaced over `[0.01, 100]` at three points per decade,
//! with `1e-4` and `1e6` standing in for the two limits.

use rayon::prelude::*;

use crate::closed_form::galerkin_t;
use crate::cost::CostParams;
use crate::error::Result;
use crate::mobility::{compute_diffusion, global_drift, MobilityParams, SECONDS_PER_HOUR};
use crate::optimize::{joint_optimize, OptimizerOptions};

pub const K_WEAK_PROXY: f64 = 1e-4;
pub const K_STRONG_PROXY: f64 = 1e6;

/// Sweep grid in increasing order, limits included.
pub fn k_grid() -> Vec<f64> {
    let mut ks = vec![K_WEAK_PROXY];
    ks.extend((0..=12).map(|i| 10f64.powf(-2.0 + i as f64 / 3.0)));
    ks.push(K_STRONG_PROXY);
    ks
}

/// Global-drift bounds of the two asymptotic regimes.
pub const WEAK_GAMMA_MAX: f64 = 1.0;
pub const STRONG_GAMMA_MIN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Row {
    pub k: f64,
    pub gamma: f64,
    pub t_galerkin: Option<f64>,
    pub t_weak: Option<f64>,
    pub t_strong: Option<f64>,
}

/// Galerkin interval at its optimal offset next to the two leading-order
/// limits `R²/(σ11 + σ22)` and `2R/μ1`, each shown only inside its regime.
pub fn fig5(base: &MobilityParams, costs: &CostParams, r: f64, ks: &[f64]) -> Result<Vec<Fig5Row>> {
    ks.par_iter()
        .map(|&k| {
            let p = base.clone().with_k(k)?;
            let d = compute_diffusion(&p)?;
            let gamma = global_drift(&d, r)?;
            let t_galerkin = match galerkin_t(&d, r, costs.lambda) {
                Ok(g) => Some(g.t_opt()),
                Err(e) => {
                    log::warn!("galerkin failed at k = {k}: {e}");
                    None
                }
            };
            Ok(Fig5Row {
                k,
                gamma,
                t_galerkin,
                t_weak: (gamma <= WEAK_GAMMA_MAX).then(|| r * r / d.trace()),
                t_strong: (gamma >= STRONG_GAMMA_MIN).then(|| 2.0 * r / d.mu1()),
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn fig5_csv(rows: &[Fig5Row]) -> String {
    let mut s = String::from("k,T_galerkin,T_weak_asymptotic,T_strong_asymptotic\n");
    for r in rows {
        s += &format!("{},{},{},{}\n", r.k, opt(r.t_galerkin), opt(r.t_weak), opt(r.t_strong));
    }
    s
}

pub const FIG6_LAMBDAS: [f64; 5] = [0.0, 0.2, 0.5, 1.0, 3.0];
pub const FIG6_VAR_ETA_S2: [f64; 2] = [0.2, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Fig6Row {
    pub k: f64,
    pub var_eta_s2: f64,
    pub lambda: f64,
    pub t: Option<f64>,
}

/// Galerkin interval at its optimal offset for several call rates and
/// dwell-time variances.
pub fn fig6(base: &MobilityParams, r: f64, ks: &[f64]) -> Result<Vec<Fig6Row>> {
    let cases: Vec<(f64, f64, f64)> = ks
        .iter()
        .flat_map(|&k| FIG6_VAR_ETA_S2.iter().flat_map(move |&v| FIG6_LAMBDAS.iter().map(move |&l| (k, v, l))))
        .collect();
    cases
        .par_iter()
        .map(|&(k, var_eta_s2, lambda)| {
            let p = base.clone().with_k(k)?.with_var_time(var_eta_s2 / (SECONDS_PER_HOUR * SECONDS_PER_HOUR))?;
            let d = compute_diffusion(&p)?;
            let t = galerkin_t(&d, r, lambda).map(|g| g.t_opt()).ok();
            Ok(Fig6Row { k, var_eta_s2, lambda, t })
        })
        .collect()
}

pub fn fig6_csv(rows: &[Fig6Row]) -> String {
    let mut s = String::from("k,var_eta,lambda,T\n");
    for r in rows {
        s += &format!("{},{},{},{}\n", r.k, r.var_eta_s2, r.lambda, opt(r.t));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig78Row {
    pub k: f64,
    pub x_opt: f64,
    pub r_opt: f64,
    pub saving_ratio: f64,
}

/// Optimal offset, radius and saving ratio across k.
pub fn fig7_fig8(base: &MobilityParams, costs: &CostParams, opts: &OptimizerOptions, ks: &[f64]) -> Result<Vec<Fig78Row>> {
    ks.par_iter()
        .map(|&k| {
            let res = joint_optimize(&base.clone().with_k(k)?, costs, opts)?;
            Ok(Fig78Row { k, x_opt: res.x_opt, r_opt: res.r_opt, saving_ratio: res.saving_ratio.unwrap_or(0.0) })
        })
        .collect()
}

pub fn fig78_csv(rows: &[Fig78Row]) -> String {
    let mut s = String::from("k,x_opt,R_opt,saving_ratio\n");
    for r in rows {
        s += &format!("{},{},{},{}\n", r.k, r.x_opt, r.r_opt, r.saving_ratio);
    }
    s
}

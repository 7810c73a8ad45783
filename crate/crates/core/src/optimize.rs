//! Joint choice of starting offset and radius.
//!
//! For each candidate radius the offset is fixed first (closed form for the
//! Galerkin and asymptotic providers, argmax of the finite-difference
//! profile along the drift axis for the PDE provider). The total cost is
//! then minimised over `ln R` by golden section inside a bracket found by a
//! coarse scan.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::closed_form::{crossover_interval, galerkin_t, regime_offset, Baseline, Regime};
use crate::cost::{build_paging_plan, paging_cost, update_cost, CostBreakdown, CostParams, PagingMode};
use crate::error::{Error, Result};
use crate::mobility::{compute_diffusion, direction_moments, DiffusionParams, MobilityParams};
use crate::pde::{solve_forward, solve_mean_interval, DiscGrid, TimeGrid};

/// Source of the mean update interval `T(X, R, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provider {
    Pde,
    Galerkin,
    Asymptotic,
}

impl FromStr for Provider {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pde" => Ok(Self::Pde),
            "galerkin" => Ok(Self::Galerkin),
            "asymptotic" => Ok(Self::Asymptotic),
            _ => Err(Error::Domain(format!("unknown provider {s:?} (expected pde, galerkin or asymptotic)"))),
        }
    }
}

impl fmt::Display for Provider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pde => "pde",
            Self::Galerkin => "galerkin",
            Self::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub provider: Provider,
    pub paging_mode: PagingMode,
    /// Grid nodes per radius for the PDE provider and for paging densities.
    pub grid_n: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Relative tolerance on `R_opt`.
    pub rel_tol: f64,
    /// Points of the bracketing scan over `[r_min, r_max]`.
    pub scan_points: usize,
}

impl OptimizerOptions {
    pub fn new(provider: Provider) -> Self {
        Self {
            provider,
            paging_mode: PagingMode::PerRound,
            grid_n: 48,
            r_min: 1e-2,
            r_max: 1e2,
            rel_tol: 1e-4,
            scan_points: 25,
        }
    }
}

/// Cost of one design `(x, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub x: f64,
    pub r: f64,
    pub t: f64,
    pub breakdown: CostBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub x_opt: f64,
    pub r_opt: f64,
    pub c_min: f64,
    pub t_opt: f64,
    pub breakdown: CostBreakdown,
    pub provider: Provider,
    pub baseline: Baseline,
    /// Filled by [`joint_optimize`] from the re-optimised centre baseline.
    pub saving_ratio: Option<f64>,
    /// True when the bracketing scan found several local minima and the
    /// dense scan was used instead.
    pub used_fallback: bool,
}

/// Offset and mean interval at radius `r` for a provider and baseline.
pub fn interval_at(
    diff: &DiffusionParams,
    r: f64,
    lambda: f64,
    baseline: Baseline,
    opts: &OptimizerOptions,
) -> Result<(f64, f64)> {
    match opts.provider {
        Provider::Pde => {
            let grid = Arc::new(DiscGrid::new(r, opts.grid_n)?);
            let field = solve_mean_interval(diff, r, lambda, &grid)?;
            Ok(match baseline {
                Baseline::Center => (0.0, field.at(0.0, 0.0)),
                Baseline::OptimalOffset => field.axis_argmax(),
            })
        }
        Provider::Galerkin => {
            let g = galerkin_t(diff, r, lambda)?;
            Ok(match baseline {
                Baseline::Center => (0.0, g.t(0.0, 0.0)),
                Baseline::OptimalOffset => (g.x_opt(), g.t_opt()),
            })
        }
        Provider::Asymptotic => {
            let t = crossover_interval(diff, r, baseline);
            let x = match baseline {
                Baseline::Center => 0.0,
                Baseline::OptimalOffset => {
                    let strong = diff.mu1() > 0.0 && 2.0 * r / diff.mu1() < r * r / diff.trace();
                    regime_offset(diff, r, if strong { Regime::Strong } else { Regime::Weak })?
                }
            };
            Ok((x, t))
        }
    }
}

/// Total cost at radius `r` with the offset the baseline prescribes.
pub fn evaluate(
    diff: &DiffusionParams,
    var_theta: f64,
    costs: &CostParams,
    r: f64,
    baseline: Baseline,
    opts: &OptimizerOptions,
) -> Result<Evaluation> {
    let (x, t) = interval_at(diff, r, costs.lambda, baseline, opts)?;
    let c_u = update_cost(t, costs.u)?;
    let breakdown = if costs.m == 1 {
        let mut b = CostBreakdown::blanket(t, r, costs)?;
        b.c_u = c_u;
        b
    } else {
        // The paging density is always the finite-difference forward
        // solution at t = T, whatever the interval provider.
        let grid = Arc::new(DiscGrid::new(r, opts.grid_n)?);
        let tgrid = TimeGrid::new(t.max(1e-12), t_steps(t, r, diff))?;
        let fwd = solve_forward(diff, [x, 0.0], r, &grid, &tgrid, &[t])?;
        let plan = build_paging_plan(costs.m, var_theta, [x, 0.0], [1.0, 0.0])?;
        CostBreakdown::new(c_u, paging_cost(&plan, &fwd.densities[0], costs.lambda, costs.v, opts.paging_mode)?)
    };
    Ok(Evaluation { x, r, t, breakdown })
}

// Steps for the forward solve: resolve the shorter of T and the diffusive
// time of a grid cell, within a fixed budget.
fn t_steps(t: f64, r: f64, diff: &DiffusionParams) -> usize {
    let tc = (r * r / diff.trace()).min(t).max(1e-12);
    ((200.0 * t / tc).ceil() as usize).clamp(200, 2000)
}

/// Minimiser of a function on `[lo, hi]` by golden section.
pub fn golden_section<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn local_minima(v: &[f64]) -> Vec<usize> {
    (0..v.len())
        .filter(|&i| (i == 0 || v[i] < v[i - 1]) && (i + 1 == v.len() || v[i] <= v[i + 1]))
        .collect()
}

/// Best radius for one baseline.
pub fn optimize_baseline(
    mobility: &MobilityParams,
    costs: &CostParams,
    baseline: Baseline,
    opts: &OptimizerOptions,
) -> Result<OptimizationResult> {
    costs.validate()?;
    let diff = compute_diffusion(mobility)?;
    let var_theta = direction_moments(mobility.k)?.var_theta;
    let cost_at = |r: f64| evaluate(&diff, var_theta, costs, r, baseline, opts).map(|e| e.breakdown.c_t);

    let scan = log_grid(opts.r_min, opts.r_max, opts.scan_points.max(5));
    let vals = scan.iter().map(|&r| cost_at(r)).collect::<Result<Vec<_>>>()?;
    let minima = local_minima(&vals);
    let (grid, vals, used_fallback) = if minima.len() > 1 {
        log::warn!("cost is not unimodal in R ({} local minima on the scan); using a dense scan", minima.len());
        let dense = log_grid(opts.r_min, opts.r_max, 20 * opts.scan_points);
        let dv = dense.iter().map(|&r| cost_at(r)).collect::<Result<Vec<_>>>()?;
        (dense, dv, true)
    } else {
        (scan, vals, false)
    };
    let best = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("scan is nonempty");
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (u, _) = golden_section(|u| cost_at(u.exp()), lo, hi, opts.rel_tol)?;
    let r_opt = u.exp();
    if best == 0 || best + 1 == grid.len() {
        log::warn!("optimal radius {r_opt:.4} km sits on the search bound");
    }
    let e = evaluate(&diff, var_theta, costs, r_opt, baseline, opts)?;
    Ok(OptimizationResult {
        x_opt: e.x,
        r_opt,
        c_min: e.breakdown.c_t,
        t_opt: e.t,
        breakdown: e.breakdown,
        provider: opts.provider,
        baseline,
        saving_ratio: None,
        used_fallback,
    })
}

/// Optimal-offset design and its saving over the re-optimised centre design.
pub fn joint_optimize(mobility: &MobilityParams, costs: &CostParams, opts: &OptimizerOptions) -> Result<OptimizationResult> {
    let mut best = optimize_baseline(mobility, costs, Baseline::OptimalOffset, opts)?;
    let center = optimize_baseline(mobility, costs, Baseline::Center, opts)?;
    best.saving_ratio = Some(ratio(center.c_min, best.c_min));
    Ok(best)
}

fn ratio(center: f64, optimal: f64) -> f64 {
    // Tiny negative values come from rounding in the two searches.
    ((center - optimal) / center).max(0.0)
}

/// `(C_center - C_optimal) / C_center` with both designs at their own R.
pub fn saving_ratio(mobility: &MobilityParams, costs: &CostParams, opts: &OptimizerOptions) -> Result<f64> {
    joint_optimize(mobility, costs, opts).map(|r| r.saving_ratio.unwrap_or(0.0))
}

pub const RESULTS_HEADER: &str = "k,lambda_per_hr,provider,x_opt_km,R_opt_km,C_u,C_p,C_t,saving_ratio";

pub fn results_row(k: f64, lambda: f64, res: &OptimizationResult) -> String {
    let b = &res.breakdown;
    format!(
        "{k},{lambda},{},{},{},{},{},{},{}",
        res.provider,
        res.x_opt,
        res.r_opt,
        b.c_u,
        b.c_p,
        b.c_t,
        res.saving_ratio.map(|s| s.to_string()).unwrap_or_default()
    )
}

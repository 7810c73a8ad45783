//! Time-dependent problems: survival `G(X, t)` (backward equation) and the
//! surviving-position density `p(Y, t)` (forward equation).
//!
//! Both use backward Euler with one banded factorization of `I - dt L`. The
//! forward step solves with the transpose of the same factors on node masses,
//! so total forward mass equals backward survival at the start node to
//! rounding, and an M-matrix keeps both non-negative.

use std::io::Write;
use std::sync::Arc;

use super::field::ScalarField;
use super::grid::DiscGrid;
use super::operator::generator;
use super::sparse::BandedLu;
use super::steady::solve_mean_interval;
use crate::error::{Error, Result};
use crate::mobility::DiffusionParams;

/// Uniform time grid `t_n = n dt`, `n = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub dt: f64,
    pub steps: usize,
}

pub const DEFAULT_STEPS: usize = 2000;

impl TimeGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() || steps < 1 {
            return Err(Error::Domain(format!("bad time grid: t_max {t_max}, steps {steps}")));
        }
        Ok(Self { t_max, dt: t_max / steps as f64, steps })
    }

    /// Twelve times the largest λ = 0 mean interval on the grid, which leaves
    /// a survival tail far below the truncation threshold.
    pub fn auto(diff: &DiffusionParams, grid: &Arc<DiscGrid>) -> Result<Self> {
        let t = solve_mean_interval(diff, grid.r, 0.0, grid)?;
        Self::new(12.0 * t.max(), DEFAULT_STEPS)
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Step index closest to `t`.
    pub fn step_of(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0) || t > self.t_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.t_max)));
        }
        Ok(((t / self.dt).round() as usize).min(self.steps))
    }
}

/// Sampled survival probability.
#[derive(Debug, Clone)]
pub struct SurvivalCurve {
    pub t: Vec<f64>,
    pub g: Vec<f64>,
}

impl SurvivalCurve {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_hr,G")?;
        for (t, g) in self.t.iter().zip(&self.g) {
            writeln!(w, "{t},{g}")?;
        }
        Ok(())
    }
}

/// Backward Euler stepper for `u_t = L u` on a fixed grid.
pub struct BackwardEuler {
    pub grid: Arc<DiscGrid>,
    pub dt: f64,
    lu: BandedLu,
}

impl BackwardEuler {
    pub fn new(diff: &DiffusionParams, grid: &Arc<DiscGrid>, dt: f64) -> Result<Self> {
        let gen = generator(diff, grid)?;
        let a = gen.matrix.shifted(1.0, -dt);
        Ok(Self { grid: grid.clone(), dt, lu: BandedLu::factor(&a)? })
    }

    /// Advances a backward-equation field by one step.
    pub fn step_backward(&self, u: &mut [f64]) {
        self.lu.solve(u);
    }

    /// Advances forward-equation node masses by one step.
    pub fn step_forward(&self, m: &mut [f64]) {
        self.lu.solve_transpose(m);
    }
}

fn check_start(grid: &DiscGrid, x: [f64; 2], r: f64) -> Result<bool> {
    if (grid.r - r).abs() > 1e-12 * r {
        return Err(Error::Grid(format!("grid radius {} does not match R = {r}", grid.r)));
    }
    let rho = x[0].hypot(x[1]);
    if rho > r * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("start point at radius {rho} lies outside R = {r}")));
    }
    Ok(rho < r * (1.0 - 1e-12))
}

/// `G(X, t_n)` for every step of `tgrid`, by bilinear interpolation of the
/// backward field at `X`.
pub fn solve_survival(
    diff: &DiffusionParams,
    x: [f64; 2],
    r: f64,
    grid: &Arc<DiscGrid>,
    tgrid: &TimeGrid,
) -> Result<SurvivalCurve> {
    let inside = check_start(grid, x, r)?;
    let t: Vec<f64> = (0..=tgrid.steps).map(|n| tgrid.time(n)).collect();
    if !inside {
        return Ok(SurvivalCurve { g: vec![0.0; t.len()], t });
    }
    let stepper = BackwardEuler::new(diff, grid, tgrid.dt)?;
    let mut field = ScalarField::new(grid.clone(), vec![1.0; grid.len()]);
    let mut g = Vec::with_capacity(t.len());
    g.push(1.0);
    for _ in 0..tgrid.steps {
        stepper.step_backward(&mut field.values);
        g.push(field.at(x[0], x[1]).clamp(0.0, 1.0));
    }
    Ok(SurvivalCurve { t, g })
}

/// Density snapshots from the forward equation.
#[derive(Debug, Clone)]
pub struct ForwardSolution {
    /// Times actually reached (requested times snapped to the step grid).
    pub times: Vec<f64>,
    pub densities: Vec<ScalarField>,
    /// Node that carried the initial unit mass.
    pub start_node: usize,
}

/// `p(·, t)` at each requested time, starting from unit mass at the node
/// nearest `X` (density = mass / h²).
pub fn solve_forward(
    diff: &DiffusionParams,
    x: [f64; 2],
    r: f64,
    grid: &Arc<DiscGrid>,
    tgrid: &TimeGrid,
    times: &[f64],
) -> Result<ForwardSolution> {
    if !check_start(grid, x, r)? {
        return Err(Error::Domain("forward density needs a start point inside the disc".into()));
    }
    let start_node = grid
        .nearest(x[0], x[1])
        .ok_or_else(|| Error::Grid("no grid node near the start point".into()))?;
    let mut wanted: Vec<(usize, usize)> = times
        .iter()
        .enumerate()
        .map(|(k, &t)| tgrid.step_of(t).map(|s| (s, k)))
        .collect::<Result<_>>()?;
    wanted.sort();
    let area = grid.cell_area();
    let mut mass = vec![0.0; grid.len()];
    mass[start_node] = 1.0;
    let last = wanted.last().map_or(0, |w| w.0);
    let stepper = if last > 0 { Some(BackwardEuler::new(diff, grid, tgrid.dt)?) } else { None };
    let mut out: Vec<Option<(f64, ScalarField)>> = vec![None; times.len()];
    let mut next = 0;
    for step in 0..=last {
        if step > 0 {
            stepper.as_ref().expect("stepper exists when stepping").step_forward(&mut mass);
        }
        while next < wanted.len() && wanted[next].0 == step {
            if let Some(bad) = mass.iter().find(|m| **m / area < -1e-12) {
                return Err(Error::Scheme(format!("forward density went negative ({})", bad / area)));
            }
            let dens = mass.iter().map(|m| (m / area).max(0.0)).collect();
            out[wanted[next].1] = Some((tgrid.time(step), ScalarField::new(grid.clone(), dens)));
            next += 1;
        }
    }
    let (times, densities) = out.into_iter().map(|o| o.expect("every time produced")).unzip();
    Ok(ForwardSolution { times, densities, start_node })
}

/// Distribution of the call inter-arrival time ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arrival {
    Exponential(f64),
    Deterministic(f64),
    /// ζ = ∞: no calls.
    Never,
}

impl Arrival {
    /// P(ζ ≥ t).
    pub fn survival(&self, t: f64) -> f64 {
        match *self {
            Arrival::Exponential(l) => (-l * t).exp(),
            Arrival::Deterministic(c) => {
                if t <= c {
                    1.0
                } else {
                    0.0
                }
            }
            Arrival::Never => 1.0,
        }
    }
}

pub const TAIL_MASS_LIMIT: f64 = 1e-4;

/// `T = ∫ G(t) P(ζ ≥ t) dt` by the trapezoid rule, plus an exponential tail
/// beyond the last sample fitted to the final decay rate of `G`.
pub fn mean_interval_general(curve: &SurvivalCurve, arrival: Arrival) -> Result<f64> {
    let (t, g) = (&curve.t, &curve.g);
    if t.len() < 2 || t.len() != g.len() {
        return Err(Error::Domain("survival curve needs at least two samples".into()));
    }
    let n = t.len() - 1;
    let t_end = t[n];
    let mut sum = 0.0;
    match arrival {
        Arrival::Deterministic(c) if c < 0.0 => return Err(Error::Domain("negative deterministic arrival".into())),
        Arrival::Exponential(l) if !(l >= 0.0) => return Err(Error::Domain("negative arrival rate".into())),
        Arrival::Deterministic(c) if c <= t_end => {
            for k in 0..n {
                if t[k + 1] <= c {
                    sum += 0.5 * (g[k] + g[k + 1]) * (t[k + 1] - t[k]);
                } else {
                    let gc = g[k] + (g[k + 1] - g[k]) * (c - t[k]) / (t[k + 1] - t[k]);
                    sum += 0.5 * (g[k] + gc) * (c - t[k]);
                    break;
                }
            }
            return Ok(sum);
        }
        _ => {}
    }
    for k in 0..n {
        let a = g[k] * arrival.survival(t[k]);
        let b = g[k + 1] * arrival.survival(t[k + 1]);
        sum += 0.5 * (a + b) * (t[k + 1] - t[k]);
    }
    let tail_mass = g[n] * arrival.survival(t_end);
    if tail_mass > TAIL_MASS_LIMIT {
        return Err(Error::Numerical {
            what: "survival tail beyond t_max (extend t_max)",
            achieved: tail_mass,
            tolerance: TAIL_MASS_LIMIT,
        });
    }
    if g[n] > 0.0 && g[n - 1] > g[n] {
        let rate = (g[n - 1] / g[n]).ln() / (t[n] - t[n - 1]);
        let tail = match arrival {
            Arrival::Exponential(l) => tail_mass / (rate + l),
            Arrival::Never => tail_mass / rate,
            Arrival::Deterministic(c) => g[n] * (-(-rate * (c - t_end)).exp_m1()) / rate,
        };
        sum += tail;
    }
    Ok(sum)
}

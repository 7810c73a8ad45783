//! Monte-Carlo continuous-time random walk.
//!
//! A trajectory waits a dwell time η, then jumps by `(ξ cos Θ, ξ sin Θ)`,
//! and repeats. The area is left at the first jump whose end point lies
//! outside the disc; crossings in the middle of a jump are not detected.
//! Trial `i` draws from ChaCha8 stream `i` of the configured seed, so every
//! estimate is bit-identical regardless of thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Exp1, Gamma};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::mobility::{LengthDist, MobilityParams, TimeDist};
use crate::pde::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPolicy {
    /// One ChaCha8 stream per trial index.
    PerTrial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_trials: usize,
    pub seed: u64,
    pub max_steps: u64,
    pub rng_streams: StreamPolicy,
}

impl SimConfig {
    pub fn new(n_trials: usize, seed: u64) -> Self {
        Self { n_trials, seed, max_steps: 10_000_000, rng_streams: StreamPolicy::PerTrial }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials < 1 || self.max_steps < 1 {
            return domain("need n_trials >= 1 and max_steps >= 1");
        }
        Ok(())
    }

    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

#[derive(Debug, Clone, Copy)]
enum LenSampler {
    Exp(Exp<f64>),
    Gamma(Gamma<f64>),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy)]
enum TimeSampler {
    Exp(Exp<f64>),
    Gamma(Gamma<f64>),
    Fixed(f64),
}

/// Draws displacement vectors and dwell times for one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct DisplacementSampler {
    k: f64,
    // e^{-kπ} - 1, cached for the inverse CDF of |Θ|.
    expm1_kpi: f64,
    len: LenSampler,
    time: TimeSampler,
}

fn gamma(mean: f64, var: f64) -> Result<Gamma<f64>> {
    Gamma::new(mean * mean / var, var / mean).map_err(|e| Error::Domain(format!("gamma parameters: {e}")))
}

impl DisplacementSampler {
    pub fn new(p: &MobilityParams) -> Result<Self> {
        p.validate()?;
        let len = match p.length_dist {
            LengthDist::Exponential => LenSampler::Exp(Exp::new(1.0 / p.mean_len).map_err(|e| Error::Domain(e.to_string()))?),
            LengthDist::Gamma if p.var_len > 0.0 => LenSampler::Gamma(gamma(p.mean_len, p.var_len)?),
            LengthDist::Gamma | LengthDist::Deterministic => LenSampler::Fixed(p.mean_len),
        };
        let time = match p.time_dist {
            TimeDist::Exponential => TimeSampler::Exp(Exp::new(1.0 / p.mean_time).map_err(|e| Error::Domain(e.to_string()))?),
            TimeDist::Gamma if p.var_time > 0.0 => TimeSampler::Gamma(gamma(p.mean_time, p.var_time)?),
            TimeDist::Gamma | TimeDist::Deterministic => TimeSampler::Fixed(p.mean_time),
        };
        Ok(Self { k: p.k, expm1_kpi: (-p.k * PI).exp_m1(), len, time })
    }

    /// Θ by inverting the CDF of |Θ|, `(1 - e^{-k t}) / (1 - e^{-kπ})`, with
    /// an independent random sign.
    pub fn theta<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        if self.k == 0.0 {
            return sign * PI * u;
        }
        let a = -(u * self.expm1_kpi).ln_1p() / self.k;
        sign * a.min(PI)
    }

    pub fn length<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.len {
            LenSampler::Exp(d) => d.sample(rng),
            LenSampler::Gamma(d) => d.sample(rng),
            LenSampler::Fixed(v) => *v,
        }
    }

    pub fn dwell<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.time {
            TimeSampler::Exp(d) => d.sample(rng),
            TimeSampler::Gamma(d) => d.sample(rng),
            TimeSampler::Fixed(v) => *v,
        }
    }

    /// One `(displacement, dwell)` pair; the three draws are independent.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ([f64; 2], f64) {
        let xi = self.length(rng);
        let th = self.theta(rng);
        let eta = self.dwell(rng);
        let (s, c) = th.sin_cos();
        ([xi * c, xi * s], eta)
    }
}

/// One-off draw without a cached sampler.
pub fn sample_displacement<R: Rng + ?Sized>(params: &MobilityParams, rng: &mut R) -> Result<([f64; 2], f64)> {
    Ok(DisplacementSampler::new(params)?.sample(rng))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitSample {
    pub tau: f64,
    pub exit_point: [f64; 2],
    pub n_steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitOutcome {
    Exited(ExitSample),
    /// Still inside after `max_steps` jumps.
    Censored { elapsed: f64, n_steps: u64 },
}

fn check_start(x: [f64; 2], r: f64) -> Result<()> {
    if !(r > 0.0) {
        return domain(format!("R must be positive, got {r}"));
    }
    if !(x[0].hypot(x[1]) < r) {
        return domain(format!("start point must lie strictly inside the disc of radius {r}"));
    }
    Ok(())
}

/// First jump end point outside the disc, with the cumulative dwell time
/// through that jump.
pub fn first_exit<R: Rng + ?Sized>(
    x: [f64; 2],
    r: f64,
    sampler: &DisplacementSampler,
    rng: &mut R,
    max_steps: u64,
) -> Result<ExitOutcome> {
    check_start(x, r)?;
    Ok(run_to_exit(x, r * r, sampler, rng, max_steps, f64::INFINITY))
}

// Stops early once the elapsed time passes `horizon`.
fn run_to_exit<R: Rng + ?Sized>(
    x: [f64; 2],
    r2: f64,
    sampler: &DisplacementSampler,
    rng: &mut R,
    max_steps: u64,
    horizon: f64,
) -> ExitOutcome {
    let mut pos = x;
    let mut t = 0.0;
    for n in 1..=max_steps {
        let (d, eta) = sampler.sample(rng);
        t += eta;
        pos[0] += d[0];
        pos[1] += d[1];
        if pos[0] * pos[0] + pos[1] * pos[1] >= r2 {
            return ExitOutcome::Exited(ExitSample { tau: t, exit_point: pos, n_steps: n });
        }
        if t > horizon {
            return ExitOutcome::Censored { elapsed: t, n_steps: n };
        }
    }
    ExitOutcome::Censored { elapsed: t, n_steps: max_steps }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub half_width_95: f64,
    pub n: usize,
}

impl EstimateWithCI {
    pub fn from_moments(sum: f64, sum_sq: f64, n: usize) -> Self {
        if n == 0 {
            return Self { mean: f64::NAN, half_width_95: f64::INFINITY, n };
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        Self { mean, half_width_95: 1.96 * (var / nf).sqrt(), n }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        // Two-pass variance for accuracy.
        let n = xs.len();
        if n == 0 {
            return Self::from_moments(0.0, 0.0, 0);
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0) } else { 0.0 };
        Self { mean, half_width_95: 1.96 * (var / n as f64).sqrt(), n }
    }

    /// `|mean - value| <= half_width_95`.
    pub fn covers(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width_95
    }
}

/// Monte-Carlo mean interval for one call rate.
#[derive(Debug, Clone, PartialEq)]
pub struct TEstimate {
    pub lambda: f64,
    pub estimate: EstimateWithCI,
    /// Trials dropped because the walk neither exited nor met a call within
    /// `max_steps` jumps.
    pub censored: usize,
}

/// Per-trial summary kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitStats {
    pub tau: EstimateWithCI,
    pub steps: EstimateWithCI,
    /// Mean of `‖exit point‖ - R`.
    pub mean_overshoot: f64,
    /// Mean of `‖exit point‖²`.
    pub mean_exit_radius_sq: f64,
    pub censored: usize,
}

/// Exit-time statistics over `cfg.n_trials` trials from `x`.
pub fn exit_statistics(x: [f64; 2], r: f64, params: &MobilityParams, cfg: &SimConfig) -> Result<ExitStats> {
    cfg.validate()?;
    check_start(x, r)?;
    let sampler = DisplacementSampler::new(params)?;
    let outcomes: Vec<ExitOutcome> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.trial_rng(i);
            run_to_exit(x, r * r, &sampler, &mut rng, cfg.max_steps, f64::INFINITY)
        })
        .collect();
    let mut taus = Vec::with_capacity(outcomes.len());
    let mut steps = Vec::with_capacity(outcomes.len());
    let (mut over, mut rad2, mut censored) = (0.0, 0.0, 0);
    for o in &outcomes {
        match o {
            ExitOutcome::Exited(s) => {
                taus.push(s.tau);
                steps.push(s.n_steps as f64);
                let rr = s.exit_point[0].hypot(s.exit_point[1]);
                over += rr - r;
                rad2 += rr * rr;
            }
            ExitOutcome::Censored { .. } => censored += 1,
        }
    }
    let n = taus.len().max(1) as f64;
    Ok(ExitStats {
        tau: EstimateWithCI::from_samples(&taus),
        steps: EstimateWithCI::from_samples(&steps),
        mean_overshoot: over / n,
        mean_exit_radius_sq: rad2 / n,
        censored,
    })
}

/// `E min(ζ, τ)` for several call rates on shared trajectories: trial `i`
/// draws one unit exponential `E_i` and uses `ζ = E_i / λ` for every λ, so
/// the estimates are coupled and ordered in λ trial by trial.
pub fn estimate_t_multi(
    x: [f64; 2],
    r: f64,
    lambdas: &[f64],
    params: &MobilityParams,
    cfg: &SimConfig,
) -> Result<Vec<TEstimate>> {
    cfg.validate()?;
    check_start(x, r)?;
    if let Some(l) = lambdas.iter().find(|l| !(**l >= 0.0)) {
        return domain(format!("call rate must be >= 0, got {l}"));
    }
    let sampler = DisplacementSampler::new(params)?;
    // A trajectory can stop once it is past every finite ζ.
    let needs_full = lambdas.iter().any(|l| *l == 0.0);
    let lam_min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let per_trial: Vec<(f64, Option<f64>)> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.trial_rng(i);
            let e: f64 = Exp1.sample(&mut rng);
            let horizon = if needs_full { f64::INFINITY } else { e / lam_min };
            let tau = match run_to_exit(x, r * r, &sampler, &mut rng, cfg.max_steps, horizon) {
                ExitOutcome::Exited(s) => Some(s.tau),
                ExitOutcome::Censored { elapsed, .. } if elapsed > horizon => Some(f64::INFINITY),
                ExitOutcome::Censored { .. } => None,
            };
            (e, tau)
        })
        .collect();
    Ok(lambdas
        .iter()
        .map(|&lam| {
            let (mut sum, mut sum_sq, mut n, mut censored) = (0.0, 0.0, 0usize, 0usize);
            for &(e, tau) in &per_trial {
                let zeta = if lam > 0.0 { e / lam } else { f64::INFINITY };
                // Trials cut off by max_steps are dropped and counted.
                let Some(t) = tau else {
                    censored += 1;
                    continue;
                };
                let v = t.min(zeta);
                sum += v;
                sum_sq += v * v;
                n += 1;
            }
            TEstimate { lambda: lam, estimate: EstimateWithCI::from_moments(sum, sum_sq, n), censored }
        })
        .collect())
}

/// `E min(ζ, τ)` with `ζ ~ Exponential(λ)` (`ζ = ∞` for λ = 0).
pub fn estimate_t(x: [f64; 2], r: f64, lambda: f64, params: &MobilityParams, cfg: &SimConfig) -> Result<TEstimate> {
    Ok(estimate_t_multi(x, r, &[lambda], params, cfg)?.remove(0))
}

/// Square histogram over `[-R, R]²` of surviving positions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityHistogram {
    pub r: f64,
    pub bins: usize,
    /// Probability mass per bin, row-major with y outer.
    pub mass: Vec<f64>,
    /// Fraction of trajectories still inside at the requested time.
    pub survival: f64,
}

impl DensityHistogram {
    pub fn empty(r: f64, bins: usize) -> Self {
        Self { r, bins, mass: vec![0.0; bins * bins], survival: 0.0 }
    }

    pub fn bin_of(&self, p: [f64; 2]) -> Option<usize> {
        let w = 2.0 * self.r / self.bins as f64;
        let i = ((p[0] + self.r) / w).floor();
        let j = ((p[1] + self.r) / w).floor();
        let b = self.bins as f64;
        (i >= 0.0 && j >= 0.0 && i < b && j < b).then(|| j as usize * self.bins + i as usize)
    }

    /// Bins the node masses `value · h²` of a density field.
    pub fn from_field(field: &ScalarField, bins: usize) -> Self {
        let mut h = Self::empty(field.grid.r, bins);
        let area = field.grid.cell_area();
        for (p, v) in field.values.iter().enumerate() {
            let (x, y) = field.grid.coords(p);
            if let Some(b) = h.bin_of([x, y]) {
                h.mass[b] += v * area;
            }
        }
        h.survival = h.mass.iter().sum();
        h
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// Positions at time `t` of the walks that have not left the disc, binned.
pub fn empirical_density(
    x: [f64; 2],
    t: f64,
    r: f64,
    params: &MobilityParams,
    cfg: &SimConfig,
    bins: usize,
) -> Result<DensityHistogram> {
    cfg.validate()?;
    check_start(x, r)?;
    if !(t >= 0.0) || bins < 1 {
        return domain("need t >= 0 and at least one bin");
    }
    let sampler = DisplacementSampler::new(params)?;
    let r2 = r * r;
    let ends: Vec<Option<[f64; 2]>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.trial_rng(i);
            let (mut pos, mut clock) = (x, 0.0);
            for _ in 0..cfg.max_steps {
                let (d, eta) = sampler.sample(&mut rng);
                clock += eta;
                if clock > t {
                    return Some(pos);
                }
                pos[0] += d[0];
                pos[1] += d[1];
                if pos[0] * pos[0] + pos[1] * pos[1] >= r2 {
                    return None;
                }
            }
            Some(pos)
        })
        .collect();
    let mut h = DensityHistogram::empty(r, bins);
    let w = 1.0 / cfg.n_trials as f64;
    let mut alive = 0usize;
    for p in ends.into_iter().flatten() {
        alive += 1;
        if let Some(b) = h.bin_of(p) {
            h.mass[b] += w;
        }
    }
    h.survival = alive as f64 * w;
    Ok(h)
}

/// CSV row for an estimate: `k,lambda,x_km,y_km,R_km,mean_T,ci,n,censored_count`.
pub fn summary_row(k: f64, x: [f64; 2], r: f64, est: &TEstimate) -> String {
    format!(
        "{k},{},{},{},{r},{},{},{},{}",
        est.lambda, x[0], x[1], est.estimate.mean, est.estimate.half_width_95, est.estimate.n, est.censored
    )
}

pub const SUMMARY_HEADER: &str = "k,lambda,x_km,y_km,R_km,mean_T,ci,n,censored_count";

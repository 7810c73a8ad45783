//! Discrete-event run of one terminal against the network: random-walk
//! motion, Poisson call arrivals, boundary-triggered and call-triggered
//! updates, and the resulting empirical costs.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::hex::CellGrid;
use super::la::{CellEntry, MtState};
use super::network::{Network, NetworkConfig, Strategy};
use crate::cost::CostParams;
use crate::ctrw::{DisplacementSampler, EstimateWithCI};
use crate::error::{Error, Result};
use crate::mobility::MobilityParams;
use crate::optimize::OptimizerOptions;

const MT_ID: u64 = 1;
const DIRECTION: [f64; 2] = [1.0, 0.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mobility: MobilityParams,
    pub costs: CostParams,
    pub strategy: Strategy,
    pub duration_hr: f64,
    pub seed: u64,
    pub opts: OptimizerOptions,
    pub r_override: Option<f64>,
    pub grid: CellGrid,
}

impl Scenario {
    pub fn new(mobility: MobilityParams, costs: CostParams, strategy: Strategy, duration_hr: f64, seed: u64) -> Self {
        Self {
            mobility,
            costs,
            strategy,
            duration_hr,
            seed,
            opts: OptimizerOptions::new(crate::optimize::Provider::Asymptotic),
            r_override: None,
            grid: CellGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeMetrics {
    pub strategy: Strategy,
    pub k: f64,
    pub lambda: f64,
    pub duration_hr: f64,
    pub update_count: usize,
    pub boundary_updates: usize,
    pub call_triggered_updates: usize,
    pub cells_paged_total: usize,
    /// Entry `i` counts calls found in round `i + 1`.
    pub paging_rounds_histogram: Vec<usize>,
    pub c_u: f64,
    pub c_p: f64,
    pub c_t: f64,
    /// Time between consecutive updates of either kind.
    pub mean_interval: EstimateWithCI,
    /// Same, restricted to intervals that ended at a boundary crossing.
    pub boundary_interval: EstimateWithCI,
    pub mean_radius: f64,
    pub mean_offset: f64,
    /// Updates whose new interior shares no cell with the previous area's
    /// interior or boundary ring.
    pub overlap_failures: usize,
    pub optimizer_failures: usize,
    pub jumps: u64,
}

impl EpisodeMetrics {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.strategy,
            self.k,
            self.lambda,
            self.duration_hr,
            self.update_count,
            self.boundary_updates,
            self.call_triggered_updates,
            self.cells_paged_total,
            self.c_u,
            self.c_p,
            self.c_t
        )
    }
}

pub const EPISODE_HEADER: &str =
    "strategy,k,lambda,duration_hr,updates,boundary_updates,call_updates,cells_paged,C_u,C_p,C_t";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Jump,
    Call,
    End,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: Kind,
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    fn cmp(&self, o: &Self) -> Ordering {
        self.time.total_cmp(&o.time).then((self.kind as u8).cmp(&(o.kind as u8)))
    }
}

struct Tally {
    last_update: f64,
    intervals: Vec<f64>,
    boundary_intervals: Vec<f64>,
    radius_sum: f64,
    offset_sum: f64,
    overlap_failures: usize,
}

fn apply_update(
    net: &mut Network,
    mt: &mut MtState,
    y_tau: [f64; 2],
    now: f64,
    boundary: bool,
    tally: &mut Tally,
) -> Result<()> {
    // The new area must meet the old one's cells, boundary ring included,
    // since the fix lies on or inside the old boundary.
    let old: Option<HashSet<_>> = net.la(MT_ID).map(|la| la.interior_cells.iter().chain(&la.boundary_cells).copied().collect());
    let reply = net.network_update(MT_ID, &mt.msg1(y_tau))?;
    mt.store(&reply, y_tau);
    let la = net.la(MT_ID).expect("area stored by network_update");
    if let Some(old) = old {
        if !la.interior_cells.iter().any(|c| old.contains(c)) {
            tally.overlap_failures += 1;
        }
    }
    let dt = now - tally.last_update;
    tally.intervals.push(dt);
    if boundary {
        tally.boundary_intervals.push(dt);
    }
    tally.radius_sum += la.r;
    tally.offset_sum += (la.initial_position[0] - la.center[0]) * DIRECTION[0]
        + (la.initial_position[1] - la.center[1]) * DIRECTION[1];
    tally.last_update = now;
    Ok(())
}

/// Runs one terminal for `duration_hr` hours.
pub fn run_episode(s: &Scenario) -> Result<EpisodeMetrics> {
    if !(s.duration_hr > 0.0) {
        return Err(Error::Domain(format!("duration must be positive, got {}", s.duration_hr)));
    }
    s.costs.validate()?;
    let sampler = DisplacementSampler::new(&s.mobility)?;
    let mut net = Network::new(NetworkConfig {
        costs: s.costs.clone(),
        opts: s.opts,
        strategy: s.strategy,
        r_override: s.r_override,
        grid: s.grid,
    });
    // Separate streams keep the motion identical across call rates.
    let mut motion = ChaCha8Rng::seed_from_u64(s.seed);
    motion.set_stream(0);
    let mut calls = ChaCha8Rng::seed_from_u64(s.seed);
    calls.set_stream(1);
    let call_gap = if s.costs.lambda > 0.0 { Some(Exp::new(s.costs.lambda).map_err(|e| Error::Domain(e.to_string()))?) } else { None };

    let mut mt = MtState::new([0.0, 0.0], &s.grid, s.mobility.clone(), DIRECTION);
    // Initial registration; not counted as an update.
    let reply = net.network_update(MT_ID, &mt.msg1(mt.position))?;
    mt.store(&reply, mt.position);

    let mut tally = Tally {
        last_update: 0.0,
        intervals: Vec::new(),
        boundary_intervals: Vec::new(),
        radius_sum: 0.0,
        offset_sum: 0.0,
        overlap_failures: 0,
    };
    let (mut boundary_updates, mut call_updates, mut cells_paged, mut jumps) = (0usize, 0usize, 0usize, 0u64);
    let mut rounds = vec![0usize; s.costs.m];
    let mut queue = BinaryHeap::new();
    queue.push(Reverse(Event { time: sampler.dwell(&mut motion), kind: Kind::Jump }));
    if let Some(g) = &call_gap {
        queue.push(Reverse(Event { time: g.sample(&mut calls), kind: Kind::Call }));
    }
    queue.push(Reverse(Event { time: s.duration_hr, kind: Kind::End }));

    while let Some(Reverse(ev)) = queue.pop() {
        match ev.kind {
            Kind::End => break,
            Kind::Jump => {
                jumps += 1;
                let xi = sampler.length(&mut motion);
                let th = sampler.theta(&mut motion);
                let (sn, cs) = th.sin_cos();
                mt.position[0] += xi * (cs * DIRECTION[0] - sn * DIRECTION[1]);
                mt.position[1] += xi * (sn * DIRECTION[0] + cs * DIRECTION[1]);
                let target = s.grid.cell_of(mt.position);
                if target != mt.current_cell {
                    for c in s.grid.line(mt.current_cell, target).into_iter().skip(1) {
                        if let CellEntry::TriggerUpdate(msg) = mt.handle_cell_entry(c)? {
                            mt.current_cell = target;
                            apply_update(&mut net, &mut mt, msg.y_tau, ev.time, true, &mut tally)?;
                            boundary_updates += 1;
                            break;
                        }
                    }
                }
                queue.push(Reverse(Event { time: ev.time + sampler.dwell(&mut motion), kind: Kind::Jump }));
            }
            Kind::Call => {
                let out = net.page(MT_ID, mt.current_cell)?;
                cells_paged += out.cells_paged;
                rounds[out.rounds - 1] += 1;
                let y = s.grid.center(mt.current_cell);
                apply_update(&mut net, &mut mt, y, ev.time, false, &mut tally)?;
                call_updates += 1;
                let gap = call_gap.as_ref().expect("calls only scheduled with a positive rate");
                queue.push(Reverse(Event { time: ev.time + gap.sample(&mut calls), kind: Kind::Call }));
            }
        }
    }

    let d = s.duration_hr;
    let updates = boundary_updates + call_updates;
    let c_u = s.costs.u * updates as f64 / d;
    let c_p = s.costs.v * cells_paged as f64 / d;
    let n = updates.max(1) as f64;
    Ok(EpisodeMetrics {
        strategy: s.strategy,
        k: s.mobility.k,
        lambda: s.costs.lambda,
        duration_hr: d,
        update_count: updates,
        boundary_updates,
        call_triggered_updates: call_updates,
        cells_paged_total: cells_paged,
        paging_rounds_histogram: rounds,
        c_u,
        c_p,
        c_t: c_u + c_p,
        mean_interval: EstimateWithCI::from_samples(&tally.intervals),
        boundary_interval: EstimateWithCI::from_samples(&tally.boundary_intervals),
        mean_radius: tally.radius_sum / n,
        mean_offset: tally.offset_sum / n,
        overlap_failures: tally.overlap_failures,
        optimizer_failures: net.optimizer_failures,
        jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_consistent() {
        let costs = CostParams::reference().with_lambda(0.5).unwrap();
        let s = Scenario::new(MobilityParams::reference(5.0), costs, Strategy::Optimal, 40.0, 9);
        let a = run_episode(&s).unwrap();
        let b = run_episode(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.update_count, a.boundary_updates + a.call_triggered_updates);
        assert!((a.c_t - a.c_u - a.c_p).abs() < 1e-12);
        assert!(a.boundary_updates > 10 && a.call_triggered_updates > 0);
        assert_eq!(a.overlap_failures, 0);
    }
}

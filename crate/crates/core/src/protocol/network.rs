//! Network side of the update exchange: area design, the location
//! database and sequential paging.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use super::hex::{CellGrid, CellId};
use super::la::{construct_la, LocationArea, Msg1, Msg2, PagingSpec};
use crate::closed_form::Baseline;
use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::mobility::{compute_diffusion, direction_moments, MobilityParams};
use crate::optimize::{interval_at, optimize_baseline, OptimizerOptions};

/// Where the terminal is placed inside each new area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Optimal,
    Center,
}

impl Strategy {
    pub fn baseline(self) -> Baseline {
        match self {
            Self::Optimal => Baseline::OptimalOffset,
            Self::Center => Baseline::Center,
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(Self::Optimal),
            "center" => Ok(Self::Center),
            _ => Err(Error::Domain(format!("unknown strategy {s:?} (expected optimal or center)"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Optimal => "optimal",
            Self::Center => "center",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub costs: CostParams,
    pub opts: OptimizerOptions,
    pub strategy: Strategy,
    /// Fixed radius instead of the cost-optimal one; the offset still
    /// follows the strategy at that radius.
    pub r_override: Option<f64>,
    pub grid: CellGrid,
}

/// Offset and radius of an area design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design {
    pub x_opt: f64,
    pub r: f64,
}

#[derive(Debug, Clone)]
struct DbEntry {
    la: LocationArea,
    design: Design,
    round_of: HashMap<CellId, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageOutcome {
    pub cells_paged: usize,
    pub rounds: usize,
    pub found: bool,
}

#[derive(Debug, Clone)]
pub struct Network {
    pub config: NetworkConfig,
    db: HashMap<u64, DbEntry>,
    cache: HashMap<String, Design>,
    pub optimizer_failures: usize,
}

impl Network {
    pub fn new(config: NetworkConfig) -> Self {
        Self { config, db: HashMap::new(), cache: HashMap::new(), optimizer_failures: 0 }
    }

    /// Area design for the reported statistics, cached because the
    /// statistics rarely change between updates.
    pub fn design(&mut self, pm1: &MobilityParams) -> Result<Design> {
        let key = format!("{pm1:?}");
        if let Some(d) = self.cache.get(&key) {
            return Ok(*d);
        }
        let cfg = &self.config;
        let baseline = cfg.strategy.baseline();
        let d = match cfg.r_override {
            Some(r) => {
                let diff = compute_diffusion(pm1)?;
                Design { x_opt: interval_at(&diff, r, cfg.costs.lambda, baseline, &cfg.opts)?.0, r }
            }
            None => {
                let o = optimize_baseline(pm1, &cfg.costs, baseline, &cfg.opts)?;
                Design { x_opt: o.x_opt, r: o.r_opt }
            }
        };
        self.cache.insert(key, d);
        Ok(d)
    }

    fn build(&mut self, msg: &Msg1, design: Design) -> Result<LocationArea> {
        let paging = PagingSpec { m: self.config.costs.m, var_theta: direction_moments(msg.pm1.k)?.var_theta };
        construct_la(msg.y_tau, msg.direction, design.x_opt, design.r, &self.config.grid, paging)
    }

    /// Designs and stores a new area; on failure the previous design is
    /// reused at the new fix and the failure is counted.
    pub fn network_update(&mut self, mt_id: u64, msg: &Msg1) -> Result<Msg2> {
        let fresh = self.design(&msg.pm1).and_then(|d| self.build(msg, d).map(|la| (la, d)));
        let (la, design) = match fresh {
            Ok(v) => v,
            Err(e) => {
                let prev = self.db.get(&mt_id).map(|e| e.design).ok_or(e)?;
                self.optimizer_failures += 1;
                log::warn!("area design failed for terminal {mt_id}; reusing the previous design");
                (self.build(msg, prev)?, prev)
            }
        };
        let round_of = la
            .sub_area_cells
            .iter()
            .enumerate()
            .flat_map(|(i, cells)| cells.iter().map(move |&c| (c, i)))
            .collect();
        let reply = Msg2 { boundary_cells: la.boundary_cells.clone() };
        self.db.insert(mt_id, DbEntry { la, design, round_of });
        Ok(reply)
    }

    pub fn la(&self, mt_id: u64) -> Option<&LocationArea> {
        self.db.get(&mt_id).map(|e| &e.la)
    }

    pub fn interior(&self, mt_id: u64) -> Option<HashSet<CellId>> {
        self.db.get(&mt_id).map(|e| e.round_of.keys().copied().collect())
    }

    /// Polls the sub-areas in order until the terminal's cell answers.
    pub fn page(&self, mt_id: u64, true_cell: CellId) -> Result<PageOutcome> {
        let e = self.db.get(&mt_id).ok_or_else(|| Error::Consistency(format!("no area stored for terminal {mt_id}")))?;
        let round = *e.round_of.get(&true_cell).ok_or_else(|| {
            Error::Consistency(format!("terminal {mt_id} is in cell {true_cell}, outside its recorded area"))
        })?;
        let cells_paged = e.la.sub_area_cells[..=round].iter().map(Vec::len).sum();
        Ok(PageOutcome { cells_paged, rounds: round + 1, found: true })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::Provider;

    fn net(strategy: Strategy, m: usize) -> Network {
        let mut costs = CostParams::reference().with_lambda(0.2).unwrap();
        costs.m = m;
        Network::new(NetworkConfig {
            costs,
            opts: OptimizerOptions::new(Provider::Asymptotic),
            strategy,
            r_override: None,
            grid: CellGrid::default(),
        })
    }

    fn msg(k: f64) -> Msg1 {
        Msg1 { pm1: MobilityParams::reference(k), y_tau: [0.4, -0.2], direction: [1.0, 0.0] }
    }

    #[test]
    fn deterministic_reply() {
        let mut n = net(Strategy::Optimal, 1);
        let a = n.network_update(1, &msg(20.0)).unwrap();
        let b = n.network_update(1, &msg(20.0)).unwrap();
        assert_eq!(a, b);
        assert!(!a.boundary_cells.is_empty());
    }

    #[test]
    fn strong_drift_starts_near_trailing_edge() {
        let mut n = net(Strategy::Optimal, 1);
        n.network_update(7, &msg(1e6)).unwrap();
        let la = n.la(7).unwrap();
        let off = la.initial_position[0] - la.center[0];
        assert!(off < -0.9 * la.r, "{off} vs R {}", la.r);
    }

    #[test]
    fn weak_drift_centres_on_fix() {
        let mut n = net(Strategy::Optimal, 1);
        n.network_update(7, &msg(1e-4)).unwrap();
        let la = n.la(7).unwrap();
        let d = (la.initial_position[0] - la.center[0]).hypot(la.initial_position[1] - la.center[1]);
        assert!(d < 0.01 * la.r, "{d}");
    }

    #[test]
    fn paging_rounds() {
        let mut n = net(Strategy::Optimal, 3);
        n.network_update(2, &msg(20.0)).unwrap();
        let la = n.la(2).unwrap().clone();
        let first = la.sub_area_cells.iter().position(|s| !s.is_empty()).unwrap();
        let last = la.sub_area_cells.iter().rposition(|s| !s.is_empty()).unwrap();
        let p = n.page(2, la.sub_area_cells[first][0]).unwrap();
        assert_eq!((p.rounds, p.cells_paged), (first + 1, la.sub_area_cells[..=first].iter().map(Vec::len).sum()));
        let p = n.page(2, la.sub_area_cells[last][0]).unwrap();
        assert_eq!(p.cells_paged, la.interior_cells.len());
        assert!(n.page(2, CellId::new(500, 500)).is_err());

        let mut one = net(Strategy::Center, 1);
        one.network_update(3, &msg(20.0)).unwrap();
        let la = one.la(3).unwrap().clone();
        for c in la.interior_cells.iter().step_by(5) {
            assert_eq!(one.page(3, *c).unwrap().cells_paged, la.interior_cells.len());
        }
    }
}

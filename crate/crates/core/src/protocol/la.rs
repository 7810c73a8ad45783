//! Location areas on the cell lattice and the terminal side of the update
//! exchange.

use std::collections::{BTreeSet, HashSet};

use super::hex::{CellGrid, CellId};
use crate::cost::build_paging_plan;
use crate::error::{Error, Result};
use crate::mobility::MobilityParams;

/// Paging partition inputs for an area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PagingSpec {
    pub m: usize,
    pub var_theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocationArea {
    pub center: [f64; 2],
    pub r: f64,
    pub initial_position: [f64; 2],
    pub preferred_direction: [f64; 2],
    /// Sorted cell ids.
    pub boundary_cells: Vec<CellId>,
    pub interior_cells: Vec<CellId>,
    /// Interior cells split by paging round; lists may be empty.
    pub sub_area_cells: Vec<Vec<CellId>>,
}

/// Builds the area whose centre sits at `Y_τ - x_opt D`, so the terminal
/// starts at signed offset `x_opt` along `D` (negative for a start behind
/// the centre).
///
/// Interior cells have their centre within `R` of the area centre; the
/// cell holding `Y_τ` is always interior so that the terminal is never
/// outside the area it was just given. Boundary cells are the non-interior
/// neighbours of interior cells.
pub fn construct_la(
    y_tau: [f64; 2],
    d: [f64; 2],
    x_opt: f64,
    r_opt: f64,
    grid: &CellGrid,
    paging: PagingSpec,
) -> Result<LocationArea> {
    if !(r_opt > 0.0) || !(x_opt.abs() < r_opt) {
        return Err(Error::Domain(format!("need R > 0 and |x_opt| < R, got x_opt = {x_opt}, R = {r_opt}")));
    }
    if ((d[0].hypot(d[1])) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("preferred direction must be a unit vector".into()));
    }
    if r_opt < 2.0 * grid.side {
        return Err(Error::DegenerateLa(format!(
            "radius {r_opt:.4} km is below one cell diameter {:.4} km",
            2.0 * grid.side
        )));
    }
    let center = [y_tau[0] - x_opt * d[0], y_tau[1] - x_opt * d[1]];
    let c0 = grid.cell_of(center);
    let rings = ((r_opt + 2.0 * grid.side) / (1.5 * grid.side)).ceil() as i64 + 1;
    let inside = |c: CellId| {
        let p = grid.center(c);
        (p[0] - center[0]).hypot(p[1] - center[1]) <= r_opt
    };
    let mut interior: BTreeSet<CellId> = grid.disc(c0, rings).into_iter().filter(|&c| inside(c)).collect();
    interior.insert(grid.cell_of(y_tau));
    let boundary: BTreeSet<CellId> =
        interior.iter().flat_map(|c| c.neighbors()).filter(|n| !interior.contains(n)).collect();

    let plan = build_paging_plan(paging.m, paging.var_theta, y_tau, d)?;
    let mut sub = vec![Vec::new(); paging.m];
    for &c in &interior {
        sub[plan.region_of(grid.center(c))].push(c);
    }
    Ok(LocationArea {
        center,
        r: r_opt,
        initial_position: y_tau,
        preferred_direction: d,
        boundary_cells: boundary.into_iter().collect(),
        interior_cells: interior.into_iter().collect(),
        sub_area_cells: sub,
    })
}

/// Update request: mobility statistics and the last update fix.
#[derive(Debug, Clone, PartialEq)]
pub struct Msg1 {
    pub pm1: MobilityParams,
    pub y_tau: [f64; 2],
    pub direction: [f64; 2],
}

/// Update reply: the boundary cells of the new area.
#[derive(Debug, Clone, PartialEq)]
pub struct Msg2 {
    pub boundary_cells: Vec<CellId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellEntry {
    NoOp,
    TriggerUpdate(Msg1),
}

/// Terminal state.
#[derive(Debug, Clone)]
pub struct MtState {
    pub position: [f64; 2],
    pub current_cell: CellId,
    pub boundary: HashSet<CellId>,
    pub pm1: MobilityParams,
    pub last_update: [f64; 2],
    pub direction: [f64; 2],
}

impl MtState {
    pub fn new(position: [f64; 2], grid: &CellGrid, pm1: MobilityParams, direction: [f64; 2]) -> Self {
        Self {
            position,
            current_cell: grid.cell_of(position),
            boundary: HashSet::new(),
            pm1,
            last_update: position,
            direction,
        }
    }

    pub fn msg1(&self, y_tau: [f64; 2]) -> Msg1 {
        Msg1 { pm1: self.pm1.clone(), y_tau, direction: self.direction }
    }

    /// Stores the boundary list of a new area.
    pub fn store(&mut self, msg: &Msg2, y_tau: [f64; 2]) {
        self.boundary = msg.boundary_cells.iter().copied().collect();
        self.last_update = y_tau;
    }

    /// Moves into a neighbouring cell and checks it against the stored list.
    pub fn handle_cell_entry(&mut self, new_cell: CellId) -> Result<CellEntry> {
        if !new_cell.is_adjacent(self.current_cell) {
            return Err(Error::Grid(format!("cell {new_cell} is not adjacent to {}", self.current_cell)));
        }
        self.current_cell = new_cell;
        Ok(if self.boundary.contains(&new_cell) {
            CellEntry::TriggerUpdate(self.msg1(self.position))
        } else {
            CellEntry::NoOp
        })
    }
}

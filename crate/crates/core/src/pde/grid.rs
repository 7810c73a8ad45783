//! Cartesian lattice embedded in a disc centred at the origin.

use crate::error::{Error, Result};

/// Lattice nodes `(i h, j h)` strictly inside the disc of radius `r`.
///
/// Nodes closer than `1e-6 h` to the circle are dropped; their neighbours
/// see the circle itself through a shortened arm. Nodes are ordered row by
/// row (y outer, x inner), which keeps the operator banded with bandwidth
/// about `2n`.
#[derive(Debug, Clone)]
pub struct DiscGrid {
    pub r: f64,
    pub h: f64,
    pub n: usize,
    nodes: Vec<(i32, i32)>,
    lookup: Vec<u32>,
}

/// Neighbour along one lattice direction: either another node at distance
/// `h`, or the circle at distance `len <= h` where the field is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arm {
    pub len: f64,
    pub node: Option<usize>,
}

const NONE: u32 = u32::MAX;

impl DiscGrid {
    /// Grid with spacing `h = r / n`.
    pub fn new(r: f64, n: usize) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Grid(format!("radius must be positive, got {r}")));
        }
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 cells per radius, got {n}")));
        }
        let h = r / n as f64;
        let side = 2 * n + 1;
        let mut lookup = vec![NONE; side * side];
        let mut nodes = Vec::new();
        let ni = n as i32;
        for j in -ni..=ni {
            for i in -ni..=ni {
                let (x, y) = (i as f64 * h, j as f64 * h);
                if r - x.hypot(y) > 1e-6 * h {
                    lookup[(j + ni) as usize * side + (i + ni) as usize] = nodes.len() as u32;
                    nodes.push((i, j));
                }
            }
        }
        Ok(Self { r, h, n, nodes, lookup })
    }

    /// Default resolution `h = r / 64`.
    pub fn default_for(r: f64) -> Result<Self> {
        Self::new(r, 64)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lattice(&self, p: usize) -> (i32, i32) {
        self.nodes[p]
    }

    pub fn coords(&self, p: usize) -> (f64, f64) {
        let (i, j) = self.nodes[p];
        (i as f64 * self.h, j as f64 * self.h)
    }

    pub fn index(&self, i: i32, j: i32) -> Option<usize> {
        let ni = self.n as i32;
        if i.abs() > ni || j.abs() > ni {
            return None;
        }
        let side = 2 * self.n + 1;
        let v = self.lookup[(j + ni) as usize * side + (i + ni) as usize];
        (v != NONE).then_some(v as usize)
    }

    /// Arms in the order -x, +x, -y, +y.
    pub fn arms(&self, p: usize) -> [Arm; 4] {
        let (i, j) = self.nodes[p];
        let (x, y) = self.coords(p);
        let r2 = self.r * self.r;
        let arm = |di: i32, dj: i32| -> Arm {
            if let Some(q) = self.index(i + di, j + dj) {
                return Arm { len: self.h, node: Some(q) };
            }
            let len = if di != 0 {
                let s = (r2 - y * y).max(0.0).sqrt();
                if di > 0 { s - x } else { x + s }
            } else {
                let s = (r2 - x * x).max(0.0).sqrt();
                if dj > 0 { s - y } else { y + s }
            };
            Arm { len: len.clamp(1e-6 * self.h * 0.5, self.h), node: None }
        };
        [arm(-1, 0), arm(1, 0), arm(0, -1), arm(0, 1)]
    }

    /// Node nearest to `(x, y)`, or `None` when no node lies within one
    /// lattice cell.
    pub fn nearest(&self, x: f64, y: f64) -> Option<usize> {
        let i = (x / self.h).round() as i32;
        let j = (y / self.h).round() as i32;
        if let Some(p) = self.index(i, j) {
            return Some(p);
        }
        let mut best: Option<(f64, usize)> = None;
        for dj in -1..=1 {
            for di in -1..=1 {
                if let Some(p) = self.index(i + di, j + dj) {
                    let (px, py) = self.coords(p);
                    let d = (px - x).hypot(py - y);
                    if best.is_none_or(|b| d < b.0) {
                        best = Some((d, p));
                    }
                }
            }
        }
        best.map(|b| b.1)
    }

    /// Nodes on the x axis, left to right.
    pub fn axis_nodes(&self) -> Vec<usize> {
        let ni = self.n as i32;
        (-ni..=ni).filter_map(|i| self.index(i, 0)).collect()
    }

    /// Control-volume area attributed to each node.
    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }
}

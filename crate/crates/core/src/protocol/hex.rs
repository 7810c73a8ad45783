//! Pointy-top hexagonal cell lattice in axial coordinates.

use std::fmt;

/// Axial coordinate of a cell; doubles as its identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub q: i64,
    pub r: i64,
}

impl CellId {
    pub const fn new(q: i64, r: i64) -> Self {
        Self { q, r }
    }

    pub fn neighbors(self) -> [CellId; 6] {
        const D: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
        D.map(|(dq, dr)| CellId::new(self.q + dq, self.r + dr))
    }

    /// Lattice distance in cell steps.
    pub fn distance(self, o: CellId) -> i64 {
        let dq = self.q - o.q;
        let dr = self.r - o.r;
        (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
    }

    pub fn is_adjacent(self, o: CellId) -> bool {
        self.distance(o) == 1
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

/// Hexagonal tiling of the plane with a fixed cell area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    /// Circumradius (centre to corner), km.
    pub side: f64,
}

impl Default for CellGrid {
    /// Cells of 1 km².
    fn default() -> Self {
        Self::with_area(1.0)
    }
}

impl CellGrid {
    pub fn with_area(area: f64) -> Self {
        Self { side: (2.0 * area / (3.0 * 3f64.sqrt())).sqrt() }
    }

    pub fn cell_area(&self) -> f64 {
        1.5 * 3f64.sqrt() * self.side * self.side
    }

    /// Base-station coordinate of a cell.
    pub fn center(&self, c: CellId) -> [f64; 2] {
        let s = self.side;
        [s * 3f64.sqrt() * (c.q as f64 + c.r as f64 / 2.0), s * 1.5 * c.r as f64]
    }

    /// Cell whose centre is nearest to `p`.
    pub fn cell_of(&self, p: [f64; 2]) -> CellId {
        let s = self.side;
        let q = (3f64.sqrt() / 3.0 * p[0] - p[1] / 3.0) / s;
        let r = (2.0 / 3.0 * p[1]) / s;
        cube_round(q, r)
    }

    /// Cells visited by the straight segment from cell `a` to cell `b`,
    /// both included, each consecutive pair adjacent.
    pub fn line(&self, a: CellId, b: CellId) -> Vec<CellId> {
        let n = a.distance(b);
        if n == 0 {
            return vec![a];
        }
        // A tiny nudge keeps samples off cell edges.
        let (aq, ar) = (a.q as f64 + 1e-6, a.r as f64 + 1e-6);
        let (bq, br) = (b.q as f64 + 1e-6, b.r as f64 + 1e-6);
        (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                cube_round(aq + (bq - aq) * t, ar + (br - ar) * t)
            })
            .collect()
    }

    /// All cells within `rings` lattice steps of `c`.
    pub fn disc(&self, c: CellId, rings: i64) -> Vec<CellId> {
        let mut out = Vec::new();
        for dq in -rings..=rings {
            for dr in (-rings).max(-dq - rings)..=rings.min(-dq + rings) {
                out.push(CellId::new(c.q + dq, c.r + dr));
            }
        }
        out
    }
}

fn cube_round(q: f64, r: f64) -> CellId {
    let s = -q - r;
    let (mut rq, mut rr, rs) = (q.round(), r.round(), s.round());
    let (dq, dr, ds) = ((rq - q).abs(), (rr - r).abs(), (rs - s).abs());
    if dq > dr && dq > ds {
        rq = -rr - rs;
    } else if dr > ds {
        rr = -rq - rs;
    }
    CellId::new(rq as i64, rr as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_area_side() {
        let g = CellGrid::default();
        assert!((g.side - 0.6204).abs() < 1e-4);
        assert!((g.cell_area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn center_round_trip() {
        let g = CellGrid::default();
        for c in g.disc(CellId::new(3, -7), 4) {
            assert_eq!(g.cell_of(g.center(c)), c);
        }
    }

    #[test]
    fn points_map_to_nearest_center() {
        let g = CellGrid::default();
        for i in 0..400 {
            let p = [(i as f64 * 0.731).sin() * 5.0, (i as f64 * 1.37).cos() * 5.0];
            let c = g.cell_of(p);
            let d = |c: CellId| {
                let q = g.center(c);
                (q[0] - p[0]).hypot(q[1] - p[1])
            };
            for n in c.neighbors() {
                assert!(d(c) <= d(n) + 1e-12);
            }
        }
    }

    #[test]
    fn line_steps_are_adjacent() {
        let g = CellGrid::default();
        let l = g.line(CellId::new(0, 0), CellId::new(5, -2));
        assert_eq!(l.len(), 6);
        assert!(l.windows(2).all(|w| w[0].is_adjacent(w[1])));
    }

    #[test]
    fn disc_counts() {
        let g = CellGrid::default();
        assert_eq!(g.disc(CellId::new(0, 0), 2).len(), 19);
    }
}

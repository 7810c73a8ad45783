use std::io::Write;
use std::sync::Arc;

use super::grid::DiscGrid;
use crate::error::Result;

/// One value per grid node; zero on the circle.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Arc<DiscGrid>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<DiscGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    fn lattice_value(&self, i: i32, j: i32) -> f64 {
        self.grid.index(i, j).map_or(0.0, |p| self.values[p])
    }

    /// Bilinear interpolation on the lattice, with lattice points outside the
    /// disc read as zero.
    pub fn at(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        if x.hypot(y) >= g.r {
            return 0.0;
        }
        let (fx, fy) = (x / g.h, y / g.h);
        let (i0, j0) = (fx.floor() as i32, fy.floor() as i32);
        let (tx, ty) = (fx - i0 as f64, fy - j0 as f64);
        let v00 = self.lattice_value(i0, j0);
        let v10 = self.lattice_value(i0 + 1, j0);
        let v01 = self.lattice_value(i0, j0 + 1);
        let v11 = self.lattice_value(i0 + 1, j0 + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }

    /// `(x, value)` along the x axis including the two boundary zeros.
    pub fn axis_profile(&self) -> Vec<(f64, f64)> {
        let r = self.grid.r;
        let mut out = vec![(-r, 0.0)];
        for p in self.grid.axis_nodes() {
            out.push((self.grid.coords(p).0, self.values[p]));
        }
        out.push((r, 0.0));
        out
    }

    /// Value on the x axis, linearly interpolated between nodes and the circle.
    pub fn axis_value(&self, x: f64) -> f64 {
        let prof = self.axis_profile();
        if x <= prof[0].0 || x >= prof[prof.len() - 1].0 {
            return 0.0;
        }
        let k = prof.partition_point(|p| p.0 <= x);
        let (a, b) = (prof[k - 1], prof[k]);
        a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
    }

    /// Maximum along the x axis, refined by a parabola through the best node
    /// and its neighbours. Returns `(x, value)`.
    pub fn axis_argmax(&self) -> (f64, f64) {
        let prof = self.axis_profile();
        let (k, _) = prof
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("profile has boundary points");
        if k == 0 || k == prof.len() - 1 {
            return prof[k];
        }
        let (x0, f0) = prof[k - 1];
        let (x1, f1) = prof[k];
        let (x2, f2) = prof[k + 1];
        // Vertex of the interpolating parabola on possibly unequal spacing.
        let d1 = (f1 - f0) / (x1 - x0);
        let d2 = (f2 - f1) / (x2 - x1);
        let c = (d2 - d1) / (x2 - x0);
        if c >= 0.0 {
            return (x1, f1);
        }
        let xv = 0.5 * (x0 + x1) - d1 / (2.0 * c);
        let xv = xv.clamp(x0, x2);
        let fv = f0 + d1 * (xv - x0) + c * (xv - x0) * (xv - x1);
        (xv, fv.max(f1))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Σ value · h².
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// Rows `x_km,y_km,value` with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x_km,y_km,value")?;
        for (p, v) in self.values.iter().enumerate() {
            let (x, y) = self.grid.coords(p);
            writeln!(w, "{x},{y},{v}")?;
        }
        Ok(())
    }
}

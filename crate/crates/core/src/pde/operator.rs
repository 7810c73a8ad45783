//! Finite-difference generator `L u = σ11/2 u_xx + σ22/2 u_yy + μ1 u_x + μ2 u_y`
//! on a [`DiscGrid`] with zero Dirichlet data on the circle.

use super::grid::DiscGrid;
use super::sparse::Csr;
use crate::error::{Error, Result};
use crate::mobility::DiffusionParams;

#[derive(Debug, Clone)]
pub struct Generator {
    pub matrix: Csr,
    /// Nodes where at least one axis fell back to upwind drift.
    pub upwind_nodes: usize,
}

/// Stencil weights for `s/2 u'' + m u'` on arms `hl`, `hr`.
///
/// Central drift is kept while it leaves the off-diagonal weights
/// non-negative (`|m| h_downwind <= s`); otherwise the drift is taken one-sided
/// in the upwind direction. Returns `(w_left, w_center, w_right, upwinded)`.
pub fn axis_weights(s: f64, m: f64, hl: f64, hr: f64) -> (f64, f64, f64, bool) {
    let span = hl + hr;
    let mut wl = s / (hl * span);
    let mut wr = s / (hr * span);
    let mut wc = -(wl + wr);
    let downwind = if m >= 0.0 { hr } else { hl };
    let central = m.abs() * downwind <= s;
    if central {
        wl -= m * hr / (hl * span);
        wr += m * hl / (hr * span);
        wc += m * (hr - hl) / (hl * hr);
    } else if m > 0.0 {
        wr += m / hr;
        wc -= m / hr;
    } else {
        wl -= m / hl;
        wc += m / hl;
    }
    (wl, wc, wr, !central)
}

pub fn check_diffusion(diff: &DiffusionParams) -> Result<()> {
    let s = diff.sigma;
    if !(s[0][0] > 0.0) || !(s[1][1] > 0.0) {
        return Err(Error::DegenerateDiffusion(format!(
            "grid solver needs sigma11, sigma22 > 0, got {}, {}",
            s[0][0], s[1][1]
        )));
    }
    let scale = s[0][0].max(s[1][1]);
    if s[0][1].abs() > 1e-9 * scale || s[1][0].abs() > 1e-9 * scale {
        return Err(Error::Scheme(
            "cross-diffusion sigma12 != 0 is not supported by the five-point stencil".into(),
        ));
    }
    if !diff.mu.iter().all(|m| m.is_finite()) {
        return Err(Error::Scheme("drift must be finite".into()));
    }
    Ok(())
}

pub fn generator(diff: &DiffusionParams, grid: &DiscGrid) -> Result<Generator> {
    check_diffusion(diff)?;
    let (s11, s22) = (diff.sigma11(), diff.sigma22());
    let (m1, m2) = (diff.mu[0], diff.mu[1]);
    let mut rows = Vec::with_capacity(grid.len());
    let mut upwind_nodes = 0;
    for p in 0..grid.len() {
        let [xl, xr, yl, yr] = grid.arms(p);
        let (al, ac, ar, ux) = axis_weights(s11, m1, xl.len, xr.len);
        let (bl, bc, br, uy) = axis_weights(s22, m2, yl.len, yr.len);
        if ux || uy {
            upwind_nodes += 1;
        }
        let mut row = Vec::with_capacity(5);
        row.push((p, ac + bc));
        for (arm, w) in [(xl, al), (xr, ar), (yl, bl), (yr, br)] {
            if let Some(q) = arm.node {
                row.push((q, w));
            }
        }
        rows.push(row);
    }
    if upwind_nodes > 0 {
        // Sweeps assemble hundreds of operators; warn once, then log at debug.
        static WARNED: std::sync::Once = std::sync::Once::new();
        let mut first = false;
        WARNED.call_once(|| first = true);
        let level = if first { log::Level::Warn } else { log::Level::Debug };
        log::log!(
            level,
            "drift dominates diffusion at grid scale; upwind drift used at {upwind_nodes} of {} nodes",
            grid.len()
        );
    }
    Ok(Generator { matrix: Csr::from_rows(rows), upwind_nodes })
}

//! Mean location-update interval: `L T - λ T = -1` in the disc, `T = 0` on
//! the circle.

use std::sync::Arc;

use super::field::ScalarField;
use super::grid::DiscGrid;
use super::operator::generator;
use super::sparse::{bicgstab, BandedLu, Csr};
use crate::error::{Error, Result};
use crate::mobility::DiffusionParams;

pub const RESIDUAL_TOL: f64 = 1e-10;
const MAX_ITER: usize = 20_000;

/// Solves `A x = b`, BiCGSTAB first and a direct banded solve if it stalls.
pub fn solve_linear(a: &Csr, b: &[f64]) -> Result<Vec<f64>> {
    match bicgstab(a, b, RESIDUAL_TOL, MAX_ITER) {
        Ok((x, st)) => {
            log::debug!("bicgstab: {} iterations, residual {:e}", st.iterations, st.residual);
            Ok(x)
        }
        Err(e) => {
            log::warn!("iterative solve failed ({e}); falling back to banded LU");
            let lu = BandedLu::factor(a)?;
            let mut x = b.to_vec();
            lu.solve(&mut x);
            Ok(x)
        }
    }
}

fn check_grid(grid: &DiscGrid, r: f64) -> Result<()> {
    if (grid.r - r).abs() > 1e-12 * r {
        return Err(Error::Grid(format!("grid radius {} does not match R = {r}", grid.r)));
    }
    Ok(())
}

/// Mean interval `T(X, R, λ)` at every grid node.
pub fn solve_mean_interval(
    diff: &DiffusionParams,
    r: f64,
    lambda: f64,
    grid: &Arc<DiscGrid>,
) -> Result<ScalarField> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    check_grid(grid, r)?;
    let gen = generator(diff, grid)?;
    let a = gen.matrix.shifted(lambda, -1.0);
    let b = vec![1.0; grid.len()];
    let t = solve_linear(&a, &b)?;
    let tmax = t.iter().copied().fold(0.0, f64::max);
    if let Some(bad) = t.iter().find(|v| **v < -1e-9 * tmax.max(1e-300) || !v.is_finite()) {
        return Err(Error::Scheme(format!("mean interval went negative or non-finite ({bad})")));
    }
    if lambda > 0.0 && tmax > (1.0 + 1e-8) / lambda {
        return Err(Error::Scheme(format!(
            "mean interval {tmax} exceeds the call-arrival bound 1/lambda = {}",
            1.0 / lambda
        )));
    }
    let t = t.into_iter().map(|v| v.max(0.0)).collect();
    Ok(ScalarField::new(grid.clone(), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_disc_matches_parabola() {
        let grid = Arc::new(DiscGrid::new(1.0, 32).unwrap());
        let t = solve_mean_interval(&DiffusionParams::brownian(1.0), 1.0, 0.0, &grid).unwrap();
        // Exact solution (R² - r²)/2 is quadratic, so the stencil is exact up
        // to solver tolerance.
        for p in 0..grid.len() {
            let (x, y) = grid.coords(p);
            assert!((t.values[p] - (1.0 - x * x - y * y) / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn bounded_by_call_rate() {
        let grid = Arc::new(DiscGrid::new(1.0, 16).unwrap());
        let d = DiffusionParams::axial(3.0, 0.2, 0.2);
        let t = solve_mean_interval(&d, 1.0, 5.0, &grid).unwrap();
        assert!(t.max() <= 0.2 && t.min() >= 0.0);
    }

    #[test]
    fn radius_mismatch_is_rejected() {
        let grid = Arc::new(DiscGrid::new(1.0, 8).unwrap());
        assert!(solve_mean_interval(&DiffusionParams::brownian(1.0), 2.0, 0.0, &grid).is_err());
    }
}

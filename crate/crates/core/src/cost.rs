//! Update and paging costs.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::pde::ScalarField;

/// Call rate (per hr), cost per update, cost per paged cell, maximum paging
/// rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub lambda: f64,
    pub u: f64,
    pub v: f64,
    pub m: usize,
}

impl CostParams {
    pub fn new(lambda: f64, u: f64, v: f64, m: usize) -> Result<Self> {
        let c = Self { lambda, u, v, m };
        c.validate()?;
        Ok(c)
    }

    /// λ = 2 calls/hr, U = 20, V = 1, single paging round.
    pub fn reference() -> Self {
        Self { lambda: 2.0, u: 20.0, v: 1.0, m: 1 }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return domain(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.u > 0.0) || !(self.v > 0.0) {
            return domain("U and V must be positive");
        }
        if self.m < 1 {
            return domain("paging delay m must be at least 1");
        }
        Ok(())
    }
}

/// `U / T`.
pub fn update_cost(t: f64, u: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("mean interval must be positive, got {t}"));
    }
    Ok(u / t)
}

/// Paging cost when the whole disc is polled at once: `λ V π R²`.
pub fn blanket_paging_cost(lambda: f64, v: f64, r: f64) -> f64 {
    lambda * v * PI * r * r
}

/// Sequential paging partition: nested wedges anchored at the last update
/// position, symmetric about the preferred direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PagingPlan {
    pub m: usize,
    /// Half-angles per round; they sum to π.
    pub angles: Vec<f64>,
    pub anchor: [f64; 2],
    /// Unit vector.
    pub axis: [f64; 2],
}

/// The first wedge spans `min(π, Var Θ)` on each side of the axis, the
/// remaining `m - 1` wedges share what is left equally. For `m = 1` the
/// single region is the whole disc and `var_theta` is ignored.
pub fn build_paging_plan(m: usize, var_theta: f64, anchor: [f64; 2], axis: [f64; 2]) -> Result<PagingPlan> {
    if m < 1 {
        return domain("paging plan needs m >= 1");
    }
    if !(var_theta >= 0.0) {
        return domain(format!("Var(Theta) must be >= 0, got {var_theta}"));
    }
    let norm = axis[0].hypot(axis[1]);
    if !(norm > 0.0) {
        return domain("paging axis must be a nonzero vector");
    }
    let axis = [axis[0] / norm, axis[1] / norm];
    let angles = if m == 1 {
        vec![PI]
    } else {
        let first = var_theta.min(PI);
        let rest = (PI - first) / (m - 1) as f64;
        std::iter::once(first).chain(std::iter::repeat_n(rest, m - 1)).collect()
    };
    Ok(PagingPlan { m, angles, anchor, axis })
}

impl PagingPlan {
    /// Upper edge of each wedge, measured from the axis.
    pub fn edges(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .angles
            .iter()
            .map(|a| {
                acc += a;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = PI;
        }
        out
    }

    /// Round (0-based) whose wedge contains `p`.
    pub fn region_of(&self, p: [f64; 2]) -> usize {
        if self.m == 1 {
            return 0;
        }
        let d = [p[0] - self.anchor[0], p[1] - self.anchor[1]];
        if d[0] == 0.0 && d[1] == 0.0 {
            return 0;
        }
        let along = d[0] * self.axis[0] + d[1] * self.axis[1];
        let across = -d[0] * self.axis[1] + d[1] * self.axis[0];
        let psi = across.abs().atan2(along);
        let edges = self.edges();
        edges.iter().position(|e| psi < *e).unwrap_or(self.m - 1)
    }

    /// Area of each wedge inside the disc of radius `r` centred at the
    /// origin: `∫ ρ(ψ)² dψ` over the wedge's two mirrored halves.
    pub fn areas(&self, r: f64) -> Result<Vec<f64>> {
        let [x0, y0] = self.anchor;
        if x0.hypot(y0) >= r {
            return Err(Error::Geometry("paging anchor must lie inside the disc".into()));
        }
        let reach = |psi: f64| {
            let (c, s) = (psi.cos(), psi.sin());
            let d = [self.axis[0] * c - self.axis[1] * s, self.axis[1] * c + self.axis[0] * s];
            let b = x0 * d[0] + y0 * d[1];
            let disc = b * b - (x0 * x0 + y0 * y0) + r * r;
            -b + disc.sqrt()
        };
        // The two halves mirror each other only when the anchor is on the
        // axis line through the centre, so integrate both explicitly.
        let mut lo = 0.0;
        let mut out = Vec::with_capacity(self.m);
        for hi in self.edges() {
            let mut a = 0.0;
            if hi > lo {
                let opts = crate::quadrature::QuadratureOptions::abs(1e-12 * r * r);
                a += 0.5 * crate::quadrature::integrate(|t| reach(t).powi(2), lo, hi, opts)?.value;
                a += 0.5 * crate::quadrature::integrate(|t| reach(-t).powi(2), lo, hi, opts)?.value;
            }
            out.push(a);
            lo = hi;
        }
        let total: f64 = out.iter().sum();
        if (total - PI * r * r).abs() > 1e-8 * PI * r * r {
            return Err(Error::Geometry(format!(
                "paging wedges cover {total} instead of the disc area {}",
                PI * r * r
            )));
        }
        Ok(out)
    }
}

/// How per-round probabilities and areas combine into a paging cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PagingMode {
    /// `λ V Σ P_i A_i`.
    #[default]
    PerRound,
    /// `λ V Σ P_i (A_1 + … + A_i)`: cells of earlier rounds are paged too.
    Cumulative,
}

impl std::str::FromStr for PagingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "per-round" => Ok(Self::PerRound),
            "cumulative" => Ok(Self::Cumulative),
            other => Err(Error::Domain(format!("unknown paging mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PagingBreakdown {
    pub c_p: f64,
    pub p: Vec<f64>,
    pub a: Vec<f64>,
}

/// Paging cost per hour from the surviving density at the mean interval.
pub fn paging_cost(
    plan: &PagingPlan,
    density: &ScalarField,
    lambda: f64,
    v: f64,
    mode: PagingMode,
) -> Result<PagingBreakdown> {
    let grid = &density.grid;
    let r = grid.r;
    let a = plan.areas(r)?;
    let mut p = vec![0.0; plan.m];
    let cell = grid.cell_area();
    for (node, val) in density.values.iter().enumerate() {
        let (x, y) = grid.coords(node);
        p[plan.region_of([x, y])] += val * cell;
    }
    let total: f64 = p.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(Error::Consistency(format!("paging probabilities sum to {total} > 1")));
    }
    let c_p = if plan.m == 1 {
        blanket_paging_cost(lambda, v, r)
    } else {
        match mode {
            PagingMode::PerRound => lambda * v * p.iter().zip(&a).map(|(p, a)| p * a).sum::<f64>(),
            PagingMode::Cumulative => {
                let mut acc = 0.0;
                lambda
                    * v
                    * p.iter()
                        .zip(&a)
                        .map(|(p, a)| {
                            acc += a;
                            p * acc
                        })
                        .sum::<f64>()
            }
        }
    };
    Ok(PagingBreakdown { c_p, p, a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub c_u: f64,
    pub c_p: f64,
    pub c_t: f64,
    pub p: Vec<f64>,
    pub a: Vec<f64>,
}

impl CostBreakdown {
    pub fn new(c_u: f64, paging: PagingBreakdown) -> Self {
        Self { c_u, c_p: paging.c_p, c_t: c_u + paging.c_p, p: paging.p, a: paging.a }
    }

    /// Single-round paging over the whole disc.
    pub fn blanket(t: f64, r: f64, costs: &CostParams) -> Result<Self> {
        let c_u = update_cost(t, costs.u)?;
        let c_p = blanket_paging_cost(costs.lambda, costs.v, r);
        Ok(Self { c_u, c_p, c_t: c_u + c_p, p: vec![1.0], a: vec![PI * r * r] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::DiscGrid;
    use std::sync::Arc;

    #[test]
    fn plan_angles() {
        let p = build_paging_plan(4, 0.5, [0.0, 0.0], [1.0, 0.0]).unwrap();
        let rest = (PI - 0.5) / 3.0;
        assert_eq!(p.angles, vec![0.5, rest, rest, rest]);
        let p = build_paging_plan(3, PI * PI / 3.0, [0.0, 0.0], [1.0, 0.0]).unwrap();
        assert_eq!(p.angles, vec![PI, 0.0, 0.0]);
        for m in 1..6 {
            let p = build_paging_plan(m, 0.37, [0.0, 0.0], [0.0, 2.0]).unwrap();
            assert!((p.angles.iter().sum::<f64>() - PI).abs() < 1e-15);
        }
    }

    #[test]
    fn wedge_areas_tile_disc_from_offset_anchor() {
        let p = build_paging_plan(3, 0.8, [-0.6, 0.1], [1.0, 0.0]).unwrap();
        let a = p.areas(1.0).unwrap();
        assert!((a.iter().sum::<f64>() - PI).abs() < 1e-9);
        // Centred anchor: wedge areas are angle · R².
        let p = build_paging_plan(3, 0.8, [0.0, 0.0], [0.0, 1.0]).unwrap();
        let a = p.areas(2.0).unwrap();
        assert!((a[0] - 0.8 * 4.0).abs() < 1e-10);
    }

    #[test]
    fn region_membership() {
        let p = build_paging_plan(3, 0.5, [0.0, 0.0], [1.0, 0.0]).unwrap();
        assert_eq!(p.region_of([1.0, 0.1]), 0);
        assert_eq!(p.region_of([1.0, -0.1]), 0);
        assert_eq!(p.region_of([0.0, 1.0]), 1);
        assert_eq!(p.region_of([-1.0, 0.01]), 2);
    }

    #[test]
    fn blanket_and_uniform_density() {
        let grid = Arc::new(DiscGrid::new(1.0, 32).unwrap());
        let n = grid.len() as f64;
        let dens = ScalarField::new(grid.clone(), vec![1.0 / (n * grid.cell_area()); grid.len()]);
        let one = build_paging_plan(1, 0.3, [0.0, 0.0], [1.0, 0.0]).unwrap();
        let c = paging_cost(&one, &dens, 2.0, 1.0, PagingMode::PerRound).unwrap();
        assert!((c.c_p - 2.0 * PI).abs() < 1e-12);
        let c2 = paging_cost(&one, &dens, 2.0, 1.0, PagingMode::Cumulative).unwrap();
        assert_eq!(c.c_p, c2.c_p);
        let four = build_paging_plan(4, 0.3, [0.0, 0.0], [1.0, 0.0]).unwrap();
        let c = paging_cost(&four, &dens, 2.0, 1.0, PagingMode::PerRound).unwrap();
        let ideal: f64 = c.a.iter().map(|a| a * a / PI).sum::<f64>() * 2.0;
        assert!((c.c_p - ideal).abs() < 0.02 * ideal);
        assert!(c.c_p < 2.0 * PI);
    }

    #[test]
    fn update_cost_rules() {
        assert_eq!(update_cost(20.0, 20.0).unwrap(), 1.0);
        assert!(update_cost(0.0, 1.0).is_err());
    }
}

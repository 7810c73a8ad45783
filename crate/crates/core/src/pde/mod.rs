//! Grid solvers for the mean interval, survival and density equations,
//! plus the exact one-dimensional case.

pub mod field;
pub mod grid;
pub mod oned;
pub mod operator;
pub mod sparse;
pub mod steady;
pub mod transient;

pub use field::ScalarField;
pub use grid::DiscGrid;
pub use oned::{solve_1d, OneD};
pub use steady::solve_mean_interval;
pub use transient::{
    mean_interval_general, solve_forward, solve_survival, Arrival, ForwardSolution, SurvivalCurve, TimeGrid,
};

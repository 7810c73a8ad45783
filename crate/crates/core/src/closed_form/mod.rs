//! Analytic approximations of the mean interval and its optima.

pub mod asymptotic;
pub mod galerkin;
pub mod strong;
pub mod weak;

pub use asymptotic::{
    asymptotic_optimum, crossover_interval, leading_interval, regime_offset, Baseline, Regime, RegimeOptimum,
};
pub use galerkin::{galerkin_t, optimal_offset, optimal_offset_for_a, GalerkinSolution};
pub use strong::{strong_drift_t, StrongDriftSolution};
pub use weak::{weak_drift_coeffs, weak_drift_t, WeakDriftCoeffs};

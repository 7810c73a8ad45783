//! Distance-based location management for mobile terminals.
//!
//! A terminal moves as a continuous-time random walk. Its diffusion limit
//! gives the mean time between location updates inside a circular location
//! area, and from that the update and paging costs. The crate solves for
//! that interval numerically and in closed form, optimizes the area radius
//! together with the terminal's starting offset, and checks the answers
//! against Monte-Carlo and a cell-level protocol simulation.

pub mod closed_form;
pub mod config;
pub mod cost;
pub mod ctrw;
pub mod error;
pub mod figures;
pub mod mobility;
pub mod optimize;
pub mod pde;
pub mod protocol;
pub mod quadrature;
pub mod validate;

pub use error::{Error, Result};
pub use mobility::{compute_diffusion, DiffusionParams, DirectionMoments, MobilityParams};

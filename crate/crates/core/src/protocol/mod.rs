//! Location-area protocol on a hexagonal cell lattice.

pub mod episode;
pub mod hex;
pub mod la;
pub mod network;

pub use episode::{run_episode, EpisodeMetrics, Scenario, EPISODE_HEADER};
pub use hex::{CellGrid, CellId};
pub use la::{construct_la, CellEntry, LocationArea, Msg1, Msg2, MtState, PagingSpec};
pub use network::{Design, Network, NetworkConfig, PageOutcome, Strategy};

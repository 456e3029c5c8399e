//! Samplers: Brownian exits, stable subordinator increments and first
//! passages, and the repeated-resurrection engine for the subordinate
//! process.
//!
//! Every sampler is driven by an explicit [`RngStream`]; identical
//! (seed, stream, parameters) reproduce identical output. Workers own
//! private streams, so there is no shared mutable state anywhere.

pub mod brownian;
pub mod resurrection;
pub mod rng;
pub mod stable;

pub use brownian::{
    brownian_exit, brownian_exit_uncorrected, brownian_exit_with_budget, BrownianExit,
    DEFAULT_STEP_BUDGET,
};
pub use resurrection::{
    resurrection_run, resurrection_run_capped, subordinate_killed_exit, ResurrectionRecord,
    DEFAULT_RESURRECTION_CAP,
};
pub use rng::{fill_gaussian, sample_gaussian_vector, RngStream};
pub use stable::{sample_stable_subordinator_increment, subordinator_first_passage, FirstPassage};

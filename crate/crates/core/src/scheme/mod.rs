//! Sequential two-qubit interactions that entangle two chosen spins.
//!
//! Starting from `|0...0>`, bond `(j, j+1)` interacts first, then each
//! following bond up to `(k-1, k)`. Every bond interaction conserves parity
//! on its two sites, so the state stays a short sum of basis strings and
//! is tracked sparsely by [`TreeState`].

mod blocks;
mod optimize;
mod schedule;
mod tree;

pub use blocks::{block_unitaries, BlockPropagator, BlockUnitaries, PARITY_TOL};
pub use optimize::{
    first_local_maximum, first_step_objective, golden_section_max, later_step_objective, optimize_tau_first,
    optimize_tau_step, OptimizerParams,
};
pub use schedule::{
    build_schedule, predict_final, predict_final_for_chain, run_tree, step_blocks, FinalPrediction, Schedule,
    ScheduleStep,
};
pub use tree::{TreeState, PRUNE};

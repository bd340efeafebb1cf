//! The sparse tree state after each step of the XY scheme on five sites.

use ddspin::chain::ChainSpec;
use ddspin::scheme::{build_schedule, step_blocks, OptimizerParams, TreeState};

fn main() -> ddspin::Result<()> {
    let spec = ChainSpec::uniform(5, [1.0, 1.0, 0.0])?;
    let schedule = build_schedule(&spec, 1, 5, &OptimizerParams::default())?;
    let blocks = step_blocks(&spec, &schedule)?;
    let mut state = TreeState::all_zeros(5)?;
    for (step, b) in schedule.steps.iter().zip(&blocks) {
        state = state.evolve_pair(step.pair.0, b)?;
        println!("after pair {:?} (tau = {:.4}): {} terms", step.pair, step.tau, state.len());
        for (bits, amp) in state.terms() {
            if amp.norm() > 1e-2 {
                println!("  {bits}  {:+.4} {:+.4}i  (|a|^2 = {:.4})", amp.re, amp.im, amp.norm_sqr());
            }
        }
    }
    Ok(())
}

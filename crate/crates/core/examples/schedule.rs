//! Optimised interaction durations for XY and XYZ chains.

use ddspin::chain::ChainSpec;
use ddspin::scheme::{build_schedule, predict_final_for_chain, OptimizerParams};

fn main() -> ddspin::Result<()> {
    let params = OptimizerParams::default();
    for (label, zeta) in [("XY", [1.0, 1.0, 0.0]), ("XYZ", [1.1, 1.0, 1.0])] {
        let spec = ChainSpec::uniform(5, zeta)?;
        let schedule = build_schedule(&spec, 1, 5, &params)?;
        let prediction = predict_final_for_chain(&spec, &schedule)?;
        println!("{label}: durations {:?}", schedule.durations().iter().map(|t| (t * 1e4).round() / 1e4).collect::<Vec<_>>());
        println!("{label}: |c00 c11| = {:.6}, concurrence {:.6}, leaked weight {:.1e}", prediction.bell_metric(), prediction.concurrence(), prediction.residual);
        println!("{}", schedule.to_json()?);
    }
    Ok(())
}

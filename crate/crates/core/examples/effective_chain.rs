//! End-to-end entanglement of the chain ends in the effective picture.

use ddspin::chain::ChainSpec;
use ddspin::dynamics::{run_effective, RecordOptions};
use ddspin::metrics::{bell_fidelity, XY_TARGET_PHASE};
use ddspin::scheme::{build_schedule, OptimizerParams};

fn main() -> ddspin::Result<()> {
    let params = OptimizerParams::default();
    for (label, n, zeta) in [("XY", 5, [1.0, 1.0, 0.0]), ("XY", 10, [1.0, 1.0, 0.0]), ("XYZ", 5, [1.1, 1.0, 1.0])] {
        let spec = ChainSpec::uniform(n, zeta)?;
        let schedule = build_schedule(&spec, 1, n, &params)?;
        let target = (1, n);
        let res = run_effective(&spec, &schedule, 0.01, &RecordOptions::new(vec![target, (1, 2)], 1)?)?;
        let series = res.series(target);
        let rise = series.iter().find(|(_, c)| *c > 1e-6).map_or(f64::NAN, |(t, _)| *t);
        let fidelity = bell_fidelity(res.final_density(target).expect("recorded"), XY_TARGET_PHASE)?;
        println!(
            "{label} N={n}: C{target:?} = {:.5} at t = {:.3}, rise begins at t = {rise:.2}, fidelity to (|00> + i|11>)/sqrt2 = {fidelity:.5}",
            res.final_concurrence(target).unwrap_or(0.0),
            res.times.last().copied().unwrap_or(0.0),
        );
    }
    Ok(())
}

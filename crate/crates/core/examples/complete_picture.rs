//! Full control-field dynamics with a noisy bath, against the effective and uncontrolled runs.

use ddspin::chain::{ChainSpec, NoiseParams};
use ddspin::dynamics::{run_complete, run_effective, run_free, FieldParams, Frame, RecordOptions};
use ddspin::scheme::{build_schedule, OptimizerParams};

fn main() -> ddspin::Result<()> {
    let spec = ChainSpec::uniform(3, [1.0, 1.0, 0.0])?;
    let schedule = build_schedule(&spec, 1, 3, &OptimizerParams::default())?;
    let field = FieldParams { n_x: 1, m_x: 2, t_c: 0.05 };
    let dt = field.t_c / 50.0;
    let record = RecordOptions::new(vec![(1, 3)], 500)?;
    let noise = NoiseParams::new(0.5, 2.0, 16, 1)?;

    let complete = run_complete(&spec, &schedule, &field, &noise, dt, &record, Frame::Toggling)?;
    let executed = complete.schedule.clone().expect("complete runs report their schedule");
    let effective = run_effective(&spec, &executed, dt, &record)?;
    let free = run_free(&spec, &noise, dt, executed.total_duration(), &record)?;

    println!("{:>8} {:>10} {:>10} {:>10}", "t", "complete", "effective", "free");
    let rows = complete.series((1, 3)).into_iter().zip(effective.series((1, 3))).zip(free.series((1, 3)));
    for (((t, c), (_, e)), (_, f)) in rows {
        println!("{t:8.3} {c:10.5} {e:10.5} {f:10.5}");
    }
    Ok(())
}

//! Time evolution of the chain in the complete, effective and free pictures.

mod integrate;
mod noise;

pub use integrate::{exponential_step, integrate_schrodinger};
pub use noise::{ou_path, OuPath, TimeGrid};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{build_h0, control_hamiltonian, pair_assignment, site_rotations, ChainSpec, NoiseParams};
use crate::error::{Error, Result};
use crate::metrics::{concurrence, ConcurrenceRow, ConcurrenceTrace, Picture};
use crate::effective::two_qubit_effective;
use crate::quantum::{embed_site_op, hermitian_eigen, kron, Operator, Pauli, StateVector};
use crate::scheme::{BlockPropagator, Schedule};

/// Environment variable capping the worker threads used for trajectories.
pub const THREADS_ENV: &str = "DDSPIN_THREADS";

/// Control-field integers shared by every step of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub n_x: i64,
    pub m_x: i64,
    pub t_c: f64,
}

impl Default for FieldParams {
    fn default() -> Self {
        Self { n_x: 1, m_x: 2, t_c: 0.05 }
    }
}

/// Frame in which the complete picture is integrated.
///
/// `Toggling` integrates `U_c^dag (H0 + H_SB) U_c` and maps reduced states
/// back with the closed-form local rotations; `Lab` integrates
/// `H0 + H_SB + H_c` directly and needs a far finer step than `t_c / 50`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    #[default]
    Toggling,
    Lab,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordOptions {
    pub pairs: Vec<(usize, usize)>,
    /// Record every `stride` integration steps; the final time is always recorded.
    pub stride: usize,
}

impl RecordOptions {
    pub fn new(pairs: Vec<(usize, usize)>, stride: usize) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::arg("no site pairs to record"));
        }
        if stride == 0 {
            return Err(Error::arg("record stride must be at least 1"));
        }
        Ok(Self { pairs, stride })
    }

    fn check(&self, n_sites: usize) -> Result<()> {
        Self::new(self.pairs.clone(), self.stride)?;
        for &(a, b) in &self.pairs {
            if a == b || a == 0 || b == 0 || a > n_sites || b > n_sites {
                return Err(Error::arg(format!("cannot record pair ({a}, {b}) of a {n_sites}-site chain")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub picture: Picture,
    pub dt: f64,
    pub schedule: Schedule,
    pub field: FieldParams,
    pub noise: NoiseParams,
    pub record: RecordOptions,
    pub frame: Frame,
}

/// Trajectory-averaged output of a run.
#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub picture: Picture,
    pub times: Vec<f64>,
    pub pairs: Vec<(usize, usize)>,
    /// Averaged reduced states, indexed `[time][pair]`.
    pub densities: Vec<Vec<Operator>>,
    /// Time-major rows: every recorded pair at the first time, then the next time.
    pub concurrences: ConcurrenceTrace,
    /// Lab-frame final state of the last trajectory.
    pub final_state: StateVector,
    /// Schedule actually executed (rounded to whole periods in the complete picture).
    pub schedule: Option<Schedule>,
    pub trajectories: usize,
}

impl EnsembleResult {
    pub fn final_concurrence(&self, pair: (usize, usize)) -> Option<f64> {
        self.concurrences.last_value(pair)
    }

    pub fn final_density(&self, pair: (usize, usize)) -> Option<&Operator> {
        let idx = self.pairs.iter().position(|&p| p == pair)?;
        self.densities.last().map(|row| &row[idx])
    }

    /// `(t, C)` for one pair.
    pub fn series(&self, pair: (usize, usize)) -> Vec<(f64, f64)> {
        self.concurrences.series(pair).map(|r| (r.t, r.value)).collect()
    }
}

/// Element-wise mean of equally long operator sequences.
pub fn ensemble_average(runs: &[Vec<Operator>]) -> Result<Vec<Operator>> {
    let first = runs.first().ok_or_else(|| Error::arg("no trajectories to average"))?;
    if runs.iter().any(|r| r.len() != first.len()) {
        return Err(Error::arg("trajectories were recorded on different time grids"));
    }
    let weight = 1.0 / runs.len() as f64;
    Ok((0..first.len())
        .map(|i| {
            let mut acc = Operator::zeros(first[i].nrows(), first[i].ncols());
            for r in runs {
                acc += &r[i];
            }
            acc.scale(weight)
        })
        .collect())
}

pub fn run(spec: &ChainSpec, cfg: &RunConfig) -> Result<EnsembleResult> {
    match cfg.picture {
        Picture::Effective => run_effective(spec, &cfg.schedule, cfg.dt, &cfg.record),
        Picture::Complete => run_complete(spec, &cfg.schedule, &cfg.field, &cfg.noise, cfg.dt, &cfg.record, cfg.frame),
        Picture::Free => run_free(spec, &cfg.noise, cfg.dt, cfg.schedule.total_duration(), &cfg.record),
    }
}

/// Each schedule step applies the exact two-site propagator of its bond in
/// sub-steps of at most `dt`; the rest of the chain is idle.
pub fn run_effective(spec: &ChainSpec, schedule: &Schedule, dt: f64, record: &RecordOptions) -> Result<EnsembleResult> {
    check_dt(dt)?;
    schedule.validate()?;
    schedule.check_fits(spec.n_sites())?;
    record.check(spec.n_sites())?;
    let n = spec.n_sites();
    let segments: Vec<Segment> = schedule
        .steps
        .iter()
        .map(|s| Segment::covering(s.tau, dt))
        .collect();
    let mut sub_steps = Vec::with_capacity(segments.len());
    for (seg, step) in segments.iter().zip(&schedule.steps) {
        let blocks = BlockPropagator::new(&two_qubit_effective(spec.bond(step.pair.0)?))?;
        sub_steps.push((step.pair.0, blocks.at(seg.h).to_operator()));
    }
    let out = drive(
        StateVector::all_zeros(n)?,
        &segments,
        record,
        |seg, _, _, psi| {
            let (left, u) = &sub_steps[seg];
            psi.apply_pair_in_place(u, *left)
        },
        |_, _, psi| record.pairs.iter().map(|&p| psi.reduced_pair(p)).collect(),
    )?;
    finish(Picture::Effective, record, vec![out], Some(schedule.clone()))
}

/// Full chain with bath fields and the control sequence of each step.
///
/// Durations are rounded to whole control periods and `dt` is shrunk so a
/// period holds a whole number of steps; `dt` may not exceed `t_c / 20`.
#[allow(clippy::too_many_arguments)]
pub fn run_complete(
    spec: &ChainSpec,
    schedule: &Schedule,
    field: &FieldParams,
    noise: &NoiseParams,
    dt: f64,
    record: &RecordOptions,
    frame: Frame,
) -> Result<EnsembleResult> {
    check_dt(dt)?;
    noise.validate()?;
    schedule.validate()?;
    schedule.check_fits(spec.n_sites())?;
    record.check(spec.n_sites())?;
    let t_c = field.t_c;
    if !(t_c > 0.0 && t_c.is_finite()) {
        return Err(Error::arg(format!("control period {t_c} must be positive")));
    }
    if dt > t_c / 20.0 * (1.0 + 1e-12) {
        return Err(Error::arg(format!("time step {dt} exceeds t_c / 20 = {}", t_c / 20.0)));
    }
    let per_period = (t_c / dt).round() as usize;
    let h = t_c / per_period as f64;
    let executed = schedule.rounded_to_period(t_c);
    let n = spec.n_sites();
    let assignments = executed
        .steps
        .iter()
        .map(|s| pair_assignment(n, s.pair.0, field.n_x, field.m_x, t_c))
        .collect::<Result<Vec<_>>>()?;
    let segments: Vec<Segment> = executed
        .steps
        .iter()
        .map(|s| Segment { n_steps: per_period * (s.tau / t_c).round() as usize, h })
        .collect();
    let total: usize = segments.iter().map(|s| s.n_steps).sum();
    let model = BathModel::new(spec, h)?;

    let trajectory = |r: usize| -> Result<TrajectoryOutput> {
        let path = bath_path(noise, total, h, r)?;
        drive(
            StateVector::all_zeros(n)?,
            &segments,
            record,
            |seg, g, t_local_mid, psi| {
                let assign = &assignments[seg];
                let b = path.as_ref().map(|p| p.at(g));
                match frame {
                    // exp(-i U^dag A U h) = U^dag exp(-i A h) U with U a product of site rotations.
                    Frame::Toggling => {
                        let rot = site_rotations(assign, t_local_mid);
                        for (i, u) in rot.iter().enumerate() {
                            psi.apply_site_in_place(u, i + 1)?;
                        }
                        model.step(b, h, psi)?;
                        for (i, u) in rot.iter().enumerate() {
                            psi.apply_site_in_place(&u.adjoint(), i + 1)?;
                        }
                    }
                    Frame::Lab => {
                        let gen = model.hamiltonian(b) + control_hamiltonian(assign, t_local_mid);
                        *psi = StateVector::from_amplitudes(n, exponential_step(&gen, h, psi.amplitudes())?)?;
                    }
                }
                Ok(())
            },
            |seg, t_local, psi| {
                let lab = frame == Frame::Lab;
                record
                    .pairs
                    .iter()
                    .map(|&p| {
                        let rho = psi.reduced_pair(p)?;
                        if lab || assignments.is_empty() {
                            return Ok(rho);
                        }
                        let rot = site_rotations(&assignments[seg], t_local);
                        let u = kron(&rot[p.0 - 1], &rot[p.1 - 1]);
                        Ok(&u * rho * u.adjoint())
                    })
                    .collect()
            },
        )
        .map(|mut out| {
            if frame == Frame::Toggling {
                if let Some((seg, t_local)) = out.end {
                    for (i, u) in site_rotations(&assignments[seg], t_local).iter().enumerate() {
                        out.final_state.apply_site_in_place(u, i + 1).expect("site in range");
                    }
                }
            }
            out
        })
    };
    let outputs = run_trajectories(effective_trajectories(noise), trajectory)?;
    finish(Picture::Complete, record, outputs, Some(executed))
}

/// Chain and bath fields without control, for `t_end` in steps of at most `dt`.
pub fn run_free(spec: &ChainSpec, noise: &NoiseParams, dt: f64, t_end: f64, record: &RecordOptions) -> Result<EnsembleResult> {
    check_dt(dt)?;
    noise.validate()?;
    record.check(spec.n_sites())?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::arg(format!("end time {t_end} must be non-negative")));
    }
    let n = spec.n_sites();
    let segment = Segment::covering(t_end, dt);
    let model = BathModel::new(spec, segment.h)?;
    let trajectory = |r: usize| -> Result<TrajectoryOutput> {
        let path = bath_path(noise, segment.n_steps, segment.h, r)?;
        drive(
            StateVector::all_zeros(n)?,
            std::slice::from_ref(&segment),
            record,
            |_, g, _, psi| model.step(path.as_ref().map(|p| p.at(g)), segment.h, psi),
            |_, _, psi| record.pairs.iter().map(|&p| psi.reduced_pair(p)).collect(),
        )
    };
    let outputs = run_trajectories(effective_trajectories(noise), trajectory)?;
    finish(Picture::Free, record, outputs, None)
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::arg(format!("time step {dt} must be positive")));
    }
    Ok(())
}

/// Without noise every trajectory is identical, so one suffices.
fn effective_trajectories(noise: &NoiseParams) -> usize {
    if noise.is_noiseless() {
        1
    } else {
        noise.n_trajectories
    }
}

fn bath_path(noise: &NoiseParams, steps: usize, h: f64, r: usize) -> Result<Option<OuPath>> {
    if noise.is_noiseless() {
        return Ok(None);
    }
    let grid = TimeGrid::new(0.0, h, steps + 1)?;
    ou_path(noise, grid, 3 * r as u64).map(Some)
}

/// `H0` plus the per-axis sums `sum_j s_k^(j)` so that `H0 + H_SB(B)` is a cheap linear combination.
struct BathModel {
    h0: Operator,
    axes: [Operator; 3],
    /// `exp(-i H0 h)` for the run's step, used whenever the bath is silent.
    free_step: Operator,
    h: f64,
}

impl BathModel {
    fn new(spec: &ChainSpec, h: f64) -> Result<Self> {
        let n = spec.n_sites();
        let dim = 1 << n;
        let axis = |p: Pauli| -> Result<Operator> {
            let mut acc = Operator::zeros(dim, dim);
            for site in 1..=n {
                acc += embed_site_op(&p.matrix(), site, n)?;
            }
            Ok(acc)
        };
        let h0 = build_h0(spec);
        let free_step = hermitian_eigen(&h0)?.propagator(h);
        Ok(Self { h0, axes: [axis(Pauli::X)?, axis(Pauli::Y)?, axis(Pauli::Z)?], free_step, h })
    }

    fn hamiltonian(&self, b: Option<[f64; 3]>) -> Operator {
        let mut h = self.h0.clone();
        if let Some(b) = b {
            for (axis, bk) in self.axes.iter().zip(b) {
                if bk != 0.0 {
                    h += axis.scale(bk);
                }
            }
        }
        h
    }

    /// `psi <- exp(-i (H0 + H_SB(b)) h) psi`.
    fn step(&self, b: Option<[f64; 3]>, h: f64, psi: &mut StateVector) -> Result<()> {
        let n = psi.n_sites();
        let next = match b {
            None if h == self.h => &self.free_step * psi.amplitudes(),
            _ => exponential_step(&self.hamiltonian(b), h, psi.amplitudes())?,
        };
        *psi = StateVector::from_amplitudes(n, next)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    n_steps: usize,
    h: f64,
}

impl Segment {
    /// Fewest equal steps of at most `dt` spanning `duration`.
    fn covering(duration: f64, dt: f64) -> Self {
        if duration <= 0.0 {
            return Self { n_steps: 0, h: 0.0 };
        }
        let n_steps = ((duration / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Self { n_steps, h: duration / n_steps as f64 }
    }
}

struct TrajectoryOutput {
    times: Vec<f64>,
    records: Vec<Vec<Operator>>,
    final_state: StateVector,
    /// Segment index and local time of the final state.
    end: Option<(usize, f64)>,
}

/// Step through the segments, recording at step 0, every `stride` steps and at the end.
///
/// `advance(segment, global_step, local_mid_time, psi)` performs one step;
/// `observe(segment, local_time, psi)` returns the reduced states to store.
fn drive<A, O>(mut psi: StateVector, segments: &[Segment], record: &RecordOptions, mut advance: A, mut observe: O) -> Result<TrajectoryOutput>
where
    A: FnMut(usize, usize, f64, &mut StateVector) -> Result<()>,
    O: FnMut(usize, f64, &StateVector) -> Result<Vec<Operator>>,
{
    let mut times = vec![0.0];
    let mut records = vec![observe(0, 0.0, &psi)?];
    let mut g = 0usize;
    let mut seg_start = 0.0;
    let mut end = None;
    let mut last_recorded = true;
    for (s, seg) in segments.iter().enumerate() {
        for q in 0..seg.n_steps {
            advance(s, g, (q as f64 + 0.5) * seg.h, &mut psi)?;
            g += 1;
            let t_local = (q + 1) as f64 * seg.h;
            end = Some((s, t_local));
            last_recorded = g.is_multiple_of(record.stride);
            if last_recorded {
                times.push(seg_start + t_local);
                records.push(observe(s, t_local, &psi)?);
            }
        }
        seg_start += seg.n_steps as f64 * seg.h;
    }
    if !last_recorded {
        let (s, t_local) = end.expect("a step was taken");
        times.push(seg_start);
        records.push(observe(s, t_local, &psi)?);
    }
    Ok(TrajectoryOutput { times, records, final_state: psi, end })
}

fn run_trajectories<F>(count: usize, trajectory: F) -> Result<Vec<TrajectoryOutput>>
where
    F: Fn(usize) -> Result<TrajectoryOutput> + Sync,
{
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&t| t > 0);
    let work = || (0..count).into_par_iter().map(&trajectory).collect::<Vec<_>>();
    let results = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::arg(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    results.into_iter().collect()
}

fn finish(picture: Picture, record: &RecordOptions, outputs: Vec<TrajectoryOutput>, schedule: Option<Schedule>) -> Result<EnsembleResult> {
    let trajectories = outputs.len();
    let times = outputs[0].times.clone();
    if outputs.iter().any(|o| o.times != times) {
        return Err(Error::arg("trajectories were recorded on different time grids"));
    }
    let n_pairs = record.pairs.len();
    let flat: Vec<Vec<Operator>> = outputs.iter().map(|o| o.records.iter().flatten().cloned().collect()).collect();
    let averaged = ensemble_average(&flat)?;
    let densities: Vec<Vec<Operator>> = averaged.chunks(n_pairs).map(|c| c.to_vec()).collect();
    let mut trace = ConcurrenceTrace::default();
    for (t, row) in times.iter().zip(&densities) {
        for (&pair, rho) in record.pairs.iter().zip(row) {
            let hermitian = (rho + rho.adjoint()).scale(0.5);
            trace.push(ConcurrenceRow { t: *t, value: concurrence(&hermitian)?, pair, picture })?;
        }
    }
    let final_state = outputs.into_iter().last().expect("at least one trajectory").final_state;
    Ok(EnsembleResult { picture, times, pairs: record.pairs.clone(), densities, concurrences: trace, final_state, schedule, trajectories })
}

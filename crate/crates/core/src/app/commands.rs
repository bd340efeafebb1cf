use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::Experiment;
use crate::chain::{build_h0, staggered_assignment, ChainSpec, FieldAssignment, FieldPair};
use crate::dynamics::{run, EnsembleResult, RunConfig};
use crate::effective::{
    average_hamiltonian_numeric, decoupling_integral, two_qubit_effective, xy_amplitudes, xy_eigenvalues, xy_eigenvectors,
    DEFAULT_QUADRATURE,
};
use crate::error::Result;
use crate::metrics::Picture;
use crate::quantum::{embed_pair_op, evolve_exact, hermitian_eigen, max_abs, StateVector};
use crate::scheme::{build_schedule, predict_final_for_chain, run_tree, FinalPrediction, Schedule};

pub struct ScheduleOutcome {
    pub schedule: Schedule,
    pub prediction: FinalPrediction,
    pub path: PathBuf,
}

/// Optimise the durations, write `schedule.json` into `out`.
pub fn cmd_schedule(exp: &Experiment, out: &Path) -> Result<ScheduleOutcome> {
    let schedule = build_schedule(&exp.spec, exp.target.0, exp.target.1, &exp.optimizer)?;
    let prediction = predict_final_for_chain(&exp.spec, &schedule)?;
    fs::create_dir_all(out)?;
    let path = out.join("schedule.json");
    fs::write(&path, schedule.to_json()? + "\n")?;
    Ok(ScheduleOutcome { schedule, prediction, path })
}

pub struct SimulateOutcome {
    pub schedule: Schedule,
    pub runs: Vec<(PathBuf, EnsembleResult)>,
}

/// One `<picture>.csv` per requested picture.
pub fn cmd_simulate(exp: &Experiment, out: &Path) -> Result<SimulateOutcome> {
    let schedule = build_schedule(&exp.spec, exp.target.0, exp.target.1, &exp.optimizer)?;
    fs::create_dir_all(out)?;
    let mut runs = Vec::new();
    for &picture in &exp.pictures {
        // The free baseline lasts as long as the controlled run it is compared with.
        let schedule = match picture {
            Picture::Effective => schedule.clone(),
            Picture::Complete | Picture::Free => schedule.rounded_to_period(exp.field.t_c),
        };
        let cfg = RunConfig {
            picture,
            dt: exp.dt,
            schedule,
            field: exp.field,
            noise: exp.noise,
            record: exp.record.clone(),
            frame: exp.frame,
        };
        let result = run(&exp.spec, &cfg)?;
        let path = out.join(format!("{picture}.csv"));
        let file = fs::File::create(&path)?;
        result.concurrences.write_csv(std::io::BufWriter::new(file))?;
        runs.push((path, result));
    }
    Ok(SimulateOutcome { schedule, runs })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StaggeredProbe {
    pub n_x: i64,
    pub m_x: i64,
    /// `(n_sites, max|H_avg| / max|H0|)`.
    pub relative_norms: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub staggered_probe: StaggeredProbe,
}

impl VerifyReport {
    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const PROBE_ZETA: [f64; 3] = [1.0, 0.7, 0.3];

/// Oracle battery; writes `verify.json` into `out`.
pub fn cmd_verify(exp: &Experiment, out: &Path) -> Result<VerifyReport> {
    let checks = vec![
        check_quadrature(exp)?,
        check_staggered(exp)?,
        check_eigensystem()?,
        check_amplitudes(),
        check_tree(exp)?,
    ];
    let staggered_probe = probe_staggered(exp)?;
    let report = VerifyReport { passed: checks.iter().all(|c| c.passed), checks, staggered_probe };
    fs::create_dir_all(out)?;
    fs::write(out.join("verify.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(report)
}

fn check(name: &'static str, value: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult { name, passed: value <= tolerance, value, tolerance, detail }
}

fn check_quadrature(exp: &Experiment) -> Result<CheckResult> {
    let zetas = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0], [1.1, 1.0, 1.0]];
    let assign = FieldAssignment::constant(2, FieldPair::doubled(exp.field.n_x), exp.field.t_c)?;
    let mut worst: f64 = 0.0;
    for zeta in zetas {
        let numeric = average_hamiltonian_numeric(&ChainSpec::uniform(2, zeta)?, &assign, DEFAULT_QUADRATURE)?;
        worst = worst.max(max_abs(&(numeric - two_qubit_effective(zeta).matrix)));
    }
    Ok(check("quadrature_vs_closed_form", worst, 1e-9, format!("constant field ({}, {}), five coupling triples", exp.field.n_x, 2 * exp.field.n_x)))
}

fn check_staggered(exp: &Experiment) -> Result<CheckResult> {
    let t_c = exp.field.t_c;
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        let spec = ChainSpec::uniform(n, PROBE_ZETA)?;
        let avg = average_hamiltonian_numeric(&spec, &staggered_assignment(n, 1, 2, t_c)?, DEFAULT_QUADRATURE)?;
        worst = worst.max(max_abs(&avg) / max_abs(&build_h0(&spec)) / 1e-9);
        let assign = staggered_assignment(n, exp.field.n_x, exp.field.m_x, t_c)?;
        for site in 1..=n {
            for k in 1..=3 {
                let integral = decoupling_integral(&assign, site, k, DEFAULT_QUADRATURE)?;
                worst = worst.max(max_abs(&integral) / (1e-10 * t_c));
            }
        }
    }
    Ok(check(
        "staggered_suppression",
        worst,
        1.0,
        format!("reference fields (1, 2) for the average; ({}, {}) for the bath integrals; value in units of the bound", exp.field.n_x, exp.field.m_x),
    ))
}

fn probe_staggered(exp: &Experiment) -> Result<StaggeredProbe> {
    let mut relative_norms = Vec::new();
    for n in 2..=5 {
        let spec = ChainSpec::uniform(n, PROBE_ZETA)?;
        let assign = staggered_assignment(n, exp.field.n_x, exp.field.m_x, exp.field.t_c)?;
        let avg = average_hamiltonian_numeric(&spec, &assign, DEFAULT_QUADRATURE)?;
        relative_norms.push((n, max_abs(&avg) / max_abs(&build_h0(&spec))));
    }
    Ok(StaggeredProbe { n_x: exp.field.n_x, m_x: exp.field.m_x, relative_norms })
}

fn check_eigensystem() -> Result<CheckResult> {
    let eig = hermitian_eigen(&two_qubit_effective([1.0, 1.0, 0.0]).matrix)?;
    let mut worst: f64 = 0.0;
    for (i, (expected, vector)) in xy_eigenvalues().iter().zip(xy_eigenvectors()).enumerate() {
        worst = worst.max((eig.values[i] - expected).abs());
        let overlap = (eig.vectors.column(i).adjoint() * &vector)[(0, 0)].norm();
        worst = worst.max((1.0 - overlap).abs());
    }
    Ok(check("eigensystem", worst, 1e-12, "XY two-qubit spectrum and eigenvectors up to phase".into()))
}

fn check_amplitudes() -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let t = 0.2 * i as f64;
        let a = xy_amplitudes(t);
        worst = worst
            .max((a.gamma1.norm_sqr() + a.gamma2.norm_sqr() - 1.0).abs())
            .max((a.eta1.norm_sqr() + a.eta2.norm_sqr() - 1.0).abs())
            .max((a.gamma1.norm() - (5f64.sqrt() * t / 4.0).cos().abs()).abs());
    }
    check("amplitude_normalization", worst, 1e-12, "100 times in [0, 20)".into())
}

fn check_tree(exp: &Experiment) -> Result<CheckResult> {
    let (spec, target) = if exp.spec.n_sites() <= 8 {
        (exp.spec.clone(), exp.target)
    } else {
        (ChainSpec::uniform(5, [1.0, 1.0, 0.0])?, (1, 5))
    };
    let taus: Vec<f64> = (target.0..target.1).map(|m| if m == target.0 { 1.4 } else { 11.3 }).collect();
    let schedule = Schedule::with_durations(target, &taus)?;
    let tree = run_tree(&spec, &schedule)?.to_state_vector();
    let n = spec.n_sites();
    let mut dense = StateVector::all_zeros(n)?;
    for step in &schedule.steps {
        let h = embed_pair_op(&two_qubit_effective(spec.bond(step.pair.0)?).matrix, step.pair.0, n)?;
        dense = evolve_exact(&h, step.tau, &dense)?;
    }
    let diff = (tree.amplitudes() - dense.amplitudes()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(check("tree_vs_dense", diff, 1e-9, format!("{n}-site chain, target {target:?}")))
}

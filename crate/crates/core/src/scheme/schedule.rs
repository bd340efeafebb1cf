use serde::{Deserialize, Serialize};

use super::blocks::{BlockPropagator, BlockUnitaries};
use super::optimize::{optimize_tau_first, optimize_tau_step, OptimizerParams};
use super::tree::TreeState;
use crate::chain::ChainSpec;
use crate::effective::two_qubit_effective;
use crate::error::{Error, Result};
use crate::quantum::{C64, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub pair: (usize, usize),
    pub tau: f64,
}

/// Consecutive bond interactions `(j, j+1), ..., (k-1, k)` entangling sites `j` and `k`.
///
/// Serialises as `{"target":[j,k],"steps":[{"pair":[i,i+1],"tau":...}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub target: (usize, usize),
    pub steps: Vec<ScheduleStep>,
}

impl Schedule {
    pub fn new(target: (usize, usize), steps: Vec<ScheduleStep>) -> Result<Self> {
        let s = Self { target, steps };
        s.validate()?;
        Ok(s)
    }

    /// Same bonds as `target` requires, with the given durations.
    pub fn with_durations(target: (usize, usize), taus: &[f64]) -> Result<Self> {
        let (j, _) = target;
        let steps = taus
            .iter()
            .enumerate()
            .map(|(m, &tau)| ScheduleStep { pair: (j + m, j + m + 1), tau })
            .collect();
        Self::new(target, steps)
    }

    pub fn validate(&self) -> Result<()> {
        let (j, k) = self.target;
        if j == 0 || k <= j {
            return Err(Error::arg(format!("target {:?} must satisfy 1 <= j < k", self.target)));
        }
        if self.steps.len() != k - j {
            return Err(Error::arg(format!(
                "target {:?} needs {} steps, schedule has {}",
                self.target,
                k - j,
                self.steps.len()
            )));
        }
        for (m, step) in self.steps.iter().enumerate() {
            if step.pair != (j + m, j + m + 1) {
                return Err(Error::arg(format!("step {} acts on {:?}, expected ({}, {})", m + 1, step.pair, j + m, j + m + 1)));
            }
            if !(step.tau >= 0.0 && step.tau.is_finite()) {
                return Err(Error::arg(format!("step {} has duration {}", m + 1, step.tau)));
            }
        }
        Ok(())
    }

    pub fn check_fits(&self, n_sites: usize) -> Result<()> {
        if self.target.1 > n_sites {
            return Err(Error::arg(format!("target {:?} outside a chain of {n_sites} sites", self.target)));
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.tau).sum()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.tau).collect()
    }

    /// Every duration replaced by the nearest whole number of control periods.
    pub fn rounded_to_period(&self, t_c: f64) -> Schedule {
        let steps = self
            .steps
            .iter()
            .map(|s| ScheduleStep { pair: s.pair, tau: (s.tau / t_c).round() * t_c })
            .collect();
        Schedule { target: self.target, steps }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Schedule = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

/// First step maximises the even-block product on bond `from`; each later
/// bond gets the step optimum for its own couplings.
pub fn build_schedule(spec: &ChainSpec, from: usize, to: usize, params: &OptimizerParams) -> Result<Schedule> {
    if from == 0 || to <= from || to > spec.n_sites() {
        return Err(Error::arg(format!(
            "cannot entangle sites {from} and {to} of a {}-site chain",
            spec.n_sites()
        )));
    }
    let mut steps = Vec::with_capacity(to - from);
    for bond in from..to {
        let h2 = two_qubit_effective(spec.bond(bond)?);
        let tau = if bond == from { optimize_tau_first(&h2, params)? } else { optimize_tau_step(&h2, params)? };
        steps.push(ScheduleStep { pair: (bond, bond + 1), tau });
    }
    Schedule::new((from, to), steps)
}

/// Block unitaries of every step of `schedule` on `spec`.
pub fn step_blocks(spec: &ChainSpec, schedule: &Schedule) -> Result<Vec<BlockUnitaries>> {
    schedule.check_fits(spec.n_sites())?;
    schedule
        .steps
        .iter()
        .map(|s| Ok(BlockPropagator::new(&two_qubit_effective(spec.bond(s.pair.0)?))?.at(s.tau)))
        .collect()
}

/// Two-term end state `c00 |0..0> + c11 |1 0..0 1>` predicted from the step amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinalPrediction {
    pub c00: C64,
    pub c11: C64,
    /// Weight carried by all other basis strings.
    pub residual: f64,
}

impl FinalPrediction {
    /// `|c00 c11|`; 0.5 for a maximally entangled two-term state.
    pub fn bell_metric(&self) -> f64 {
        (self.c00 * self.c11).norm()
    }

    /// Concurrence of the two-term state.
    pub fn concurrence(&self) -> f64 {
        2.0 * self.bell_metric()
    }
}

pub fn predict_final(schedule: &Schedule, blocks: &[BlockUnitaries]) -> Result<FinalPrediction> {
    schedule.validate()?;
    if blocks.len() != schedule.steps.len() {
        return Err(Error::arg(format!("{} block sets for {} steps", blocks.len(), schedule.steps.len())));
    }
    let c00 = blocks.iter().fold(ONE, |acc, b| acc * b.stay_even());
    let c11 = blocks[1..].iter().fold(blocks[0].flip_even(), |acc, b| acc * b.hop_odd());
    let residual = (1.0 - c00.norm_sqr() - c11.norm_sqr()).max(0.0);
    Ok(FinalPrediction { c00, c11, residual })
}

pub fn predict_final_for_chain(spec: &ChainSpec, schedule: &Schedule) -> Result<FinalPrediction> {
    predict_final(schedule, &step_blocks(spec, schedule)?)
}

/// Evolve `|0...0>` through every step of the schedule with the sparse tree state.
pub fn run_tree(spec: &ChainSpec, schedule: &Schedule) -> Result<TreeState> {
    let blocks = step_blocks(spec, schedule)?;
    let mut state = TreeState::all_zeros(spec.n_sites())?;
    for (step, b) in schedule.steps.iter().zip(&blocks) {
        state = state.evolve_pair(step.pair.0, b)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn xy(n: usize) -> ChainSpec {
        ChainSpec::uniform(n, [1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn json_shape() {
        let s = Schedule::with_durations((1, 3), &[1.5, 11.25]).unwrap();
        assert_eq!(s.to_json().unwrap(), r#"{"target":[1,3],"steps":[{"pair":[1,2],"tau":1.5},{"pair":[2,3],"tau":11.25}]}"#);
        assert_eq!(Schedule::from_json(&s.to_json().unwrap()).unwrap(), s);
        assert!(Schedule::from_json(r#"{"target":[1,3],"steps":[{"pair":[2,3],"tau":1.0},{"pair":[1,2],"tau":1.0}]}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(Schedule::with_durations((2, 2), &[]).is_err());
        assert!(Schedule::with_durations((1, 3), &[1.0]).is_err());
        assert!(Schedule::with_durations((1, 2), &[-1.0]).is_err());
        assert!(build_schedule(&xy(5), 3, 3, &OptimizerParams::default()).is_err());
        assert!(build_schedule(&xy(5), 1, 6, &OptimizerParams::default()).is_err());
    }

    #[test]
    fn single_step_schedule() {
        let s = build_schedule(&xy(5), 1, 2, &OptimizerParams::default()).unwrap();
        assert_eq!(s.steps.len(), 1);
        assert_abs_diff_eq!(s.steps[0].tau, PI / 5f64.sqrt(), epsilon = 1e-6);
        let p = predict_final_for_chain(&xy(5), &s).unwrap();
        assert_abs_diff_eq!(p.bell_metric(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.residual, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn xy_prediction_with_rounded_durations() {
        // |c00 c11| = 0.5 * prod |cos(sqrt5 t/4) sin(5t/4)| evaluated directly.
        let tau = 11.3;
        let factor = ((5f64.sqrt() * tau / 4.0).cos() * (5.0 * tau / 4.0).sin()).abs();
        let s = Schedule::with_durations((1, 5), &[PI / 5f64.sqrt(), tau, tau, tau]).unwrap();
        let p = predict_final_for_chain(&xy(5), &s).unwrap();
        assert_abs_diff_eq!(p.bell_metric(), 0.5 * factor.powi(3), epsilon = 1e-12);
        assert!(p.bell_metric() > 0.498);
        assert!(p.residual <= 0.01);
    }

    #[test]
    fn idle_schedule_prediction() {
        let s = Schedule::with_durations((2, 4), &[0.0, 0.0]).unwrap();
        let p = predict_final_for_chain(&xy(4), &s).unwrap();
        assert_abs_diff_eq!((p.c00 - ONE).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.c11.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn prediction_matches_tree_amplitudes() {
        let spec = xy(6);
        let s = build_schedule(&spec, 2, 6, &OptimizerParams::default()).unwrap();
        let p = predict_final_for_chain(&spec, &s).unwrap();
        let tree = run_tree(&spec, &s).unwrap();
        assert_abs_diff_eq!((tree.amplitude("000000") - p.c00).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((tree.amplitude("010001") - p.c11).norm(), 0.0, epsilon = 1e-12);
    }
}

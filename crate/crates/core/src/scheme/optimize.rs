//! Duration search: earliest qualifying local maximum on a uniform grid,
//! refined by golden-section search.

use serde::{Deserialize, Serialize};

use super::blocks::BlockPropagator;
use crate::effective::TwoQubitEffective;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerParams {
    /// Upper end of the search window.
    pub t_max: f64,
    /// Spacing of the coarse scan.
    pub grid_step: f64,
    /// Accepted shortfall below the ideal maximum (0.5 or 1).
    pub epsilon: f64,
}

impl Default for OptimizerParams {
    fn default() -> Self {
        Self { t_max: 50.0, grid_step: 1e-3, epsilon: 5e-3 }
    }
}

impl OptimizerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::arg(format!("grid step {} must be positive", self.grid_step)));
        }
        if !(self.t_max > self.grid_step) {
            return Err(Error::arg(format!("search window {} shorter than one grid step", self.t_max)));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::arg("epsilon must be non-negative"));
        }
        Ok(())
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const REFINE_TOL: f64 = 1e-11;

/// Maximise a unimodal `f` on `[lo, hi]`; returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Earliest local maximum of `f` on `(0, t_max)` whose refined value reaches `threshold`.
pub fn first_local_maximum<F: Fn(f64) -> f64>(f: F, t_max: f64, grid_step: f64, threshold: f64) -> Option<(f64, f64)> {
    let n = (t_max / grid_step).ceil() as usize;
    let mut prev = f(0.0);
    let mut cur = f(grid_step);
    for i in 1..n {
        let next = f((i + 1) as f64 * grid_step);
        if cur > prev && cur >= next {
            let lo = (i - 1) as f64 * grid_step;
            let hi = (i + 1) as f64 * grid_step;
            let (t, v) = golden_section_max(&f, lo, hi, REFINE_TOL);
            let (t, v) = if v >= cur { (t, v) } else { (i as f64 * grid_step, cur) };
            if v >= threshold {
                return Some((t, v));
            }
        }
        prev = cur;
        cur = next;
    }
    None
}

/// Product `|<00|U|00> <11|U|00>|`; equals `|gamma_1 gamma_2|` at the XY point.
pub fn first_step_objective(prop: &BlockPropagator, tau: f64) -> f64 {
    let b = prop.at(tau);
    (b.stay_even() * b.flip_even()).norm()
}

/// Product `|<00|U|00>| |<01|U|10>|`; equals `|gamma_1 eta_1|` at the XY point.
pub fn later_step_objective(prop: &BlockPropagator, tau: f64) -> f64 {
    let b = prop.at(tau);
    b.stay_even().norm() * b.hop_odd().norm()
}

/// Duration of the opening interaction: first maximum of the even-block
/// product reaching `0.5 - epsilon`.
pub fn optimize_tau_first(h2: &TwoQubitEffective, params: &OptimizerParams) -> Result<f64> {
    params.validate()?;
    let prop = BlockPropagator::new(h2)?;
    first_local_maximum(|t| first_step_objective(&prop, t), params.t_max, params.grid_step, 0.5 - params.epsilon)
        .map(|(t, _)| t)
        .ok_or_else(|| {
            Error::SearchFailure(format!(
                "no maximum of |a00 a11| >= {} in (0, {}] for couplings {:?}",
                0.5 - params.epsilon,
                params.t_max,
                h2.couplings
            ))
        })
}

/// Duration of every later interaction: first maximum of the step product
/// reaching `1 - epsilon`.
pub fn optimize_tau_step(h2: &TwoQubitEffective, params: &OptimizerParams) -> Result<f64> {
    params.validate()?;
    let prop = BlockPropagator::new(h2)?;
    first_local_maximum(|t| later_step_objective(&prop, t), params.t_max, params.grid_step, 1.0 - params.epsilon)
        .map(|(t, _)| t)
        .ok_or_else(|| {
            Error::SearchFailure(format!(
                "no maximum of |a00| |a01,10| >= {} in (0, {}] for couplings {:?}",
                1.0 - params.epsilon,
                params.t_max,
                h2.couplings
            ))
        })
}

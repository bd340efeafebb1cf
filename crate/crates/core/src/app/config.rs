use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, NoiseParams};
use crate::dynamics::{FieldParams, Frame, RecordOptions};
use crate::error::{Error, Result};
use crate::metrics::Picture;
use crate::scheme::OptimizerParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Couplings {
    Uniform([f64; 3]),
    PerBond(Vec<[f64; 3]>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub n_sites: usize,
    pub couplings: Couplings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    pub n_x: i64,
    pub m_x: i64,
    pub t_c: f64,
    /// Optional explicit y integers; only `2 n_x` and `2 m_x` are supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_y: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_y: Option<i64>,
}

impl Default for FieldSection {
    fn default() -> Self {
        let f = FieldParams::default();
        Self { n_x: f.n_x, m_x: f.m_x, t_c: f.t_c, n_y: None, m_y: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub tau_c: f64,
    pub sigma: f64,
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        let n = NoiseParams::default();
        Self { tau_c: n.correlation_time, sigma: n.std_dev, trajectories: n.n_trajectories, seed: n.seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeSection {
    pub from: usize,
    pub to: usize,
    pub epsilon: f64,
    pub t_max: f64,
    pub grid_step: f64,
}

impl Default for SchemeSection {
    fn default() -> Self {
        let o = OptimizerParams::default();
        Self { from: 1, to: 5, epsilon: o.epsilon, t_max: o.t_max, grid_step: o.grid_step }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub pictures: Vec<Picture>,
    /// Integrator step; `t_c / 50` when absent.
    pub dt: Option<f64>,
    pub record_stride: usize,
    /// Extra pairs to record besides the scheme target.
    pub record_pairs: Vec<(usize, usize)>,
    pub frame: Frame,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { pictures: vec![Picture::Effective], dt: None, record_stride: 10, record_pairs: Vec::new(), frame: Frame::Toggling }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: PathBuf,
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { path: PathBuf::from("out"), format: "csv".into() }
    }
}

/// One JSON document describing an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub chain: ChainSection,
    #[serde(default)]
    pub field: FieldSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    /// XY chain of five sites, entangling the ends.
    fn default() -> Self {
        Self {
            chain: ChainSection { n_sites: 5, couplings: Couplings::Uniform([1.0, 1.0, 0.0]) },
            field: FieldSection::default(),
            noise: NoiseSection::default(),
            scheme: SchemeSection::default(),
            run: RunSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// A validated configuration with module types resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub spec: ChainSpec,
    pub field: FieldParams,
    pub noise: NoiseParams,
    pub optimizer: OptimizerParams,
    pub target: (usize, usize),
    pub pictures: Vec<Picture>,
    pub dt: f64,
    pub record: RecordOptions,
    pub frame: Frame,
    pub output: PathBuf,
}

fn invalid(e: Error) -> Error {
    match e {
        Error::Argument(m) | Error::Contract(m) => Error::Validation(m),
        other => other,
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| reject(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Check every module precondition before anything runs.
    pub fn resolve(&self) -> Result<Experiment> {
        let n = self.chain.n_sites;
        let couplings = match &self.chain.couplings {
            Couplings::Uniform(z) => vec![*z; n.saturating_sub(1)],
            Couplings::PerBond(list) => list.clone(),
        };
        let spec = ChainSpec::new(n, couplings).map_err(invalid)?;

        let f = &self.field;
        if f.n_x == f.m_x {
            return Err(reject(format!("n_x = m_x = {}; neighbouring sites need different fields", f.n_x)));
        }
        if f.n_x == 0 || f.m_x == 0 {
            return Err(reject("field integers must be nonzero"));
        }
        for (name, x, y) in [("n", f.n_x, f.n_y), ("m", f.m_x, f.m_y)] {
            match y {
                Some(y) if y == x => return Err(reject(format!("{name}_x = {name}_y = {x}; decoupling needs f_x != f_y"))),
                Some(y) if y != 2 * x => {
                    return Err(reject(format!("{name}_y = {y}: only {name}_y = 2 {name}_x = {} is supported", 2 * x)))
                }
                _ => {}
            }
        }
        if !(f.t_c > 0.0 && f.t_c.is_finite()) {
            return Err(reject(format!("t_c = {} must be positive", f.t_c)));
        }
        let field = FieldParams { n_x: f.n_x, m_x: f.m_x, t_c: f.t_c };

        let noise = NoiseParams::new(self.noise.tau_c, self.noise.sigma, self.noise.trajectories, self.noise.seed).map_err(invalid)?;

        let s = &self.scheme;
        if s.from == s.to {
            return Err(reject(format!("from = to = {}; the scheme entangles two distinct sites", s.from)));
        }
        if s.from == 0 || s.to < s.from || s.to > n {
            return Err(reject(format!("cannot entangle sites {} and {} of a {n}-site chain", s.from, s.to)));
        }
        let optimizer = OptimizerParams { t_max: s.t_max, grid_step: s.grid_step, epsilon: s.epsilon };
        optimizer.validate().map_err(invalid)?;

        let r = &self.run;
        if r.pictures.is_empty() {
            return Err(reject("no pictures requested"));
        }
        let dt = r.dt.unwrap_or(f.t_c / 50.0);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(reject(format!("dt = {dt} must be positive")));
        }
        if r.pictures.contains(&Picture::Complete) && dt > f.t_c / 20.0 * (1.0 + 1e-12) {
            return Err(reject(format!("dt = {dt} exceeds t_c / 20 = {}", f.t_c / 20.0)));
        }
        let target = (s.from, s.to);
        let mut pairs = vec![target];
        for &p in &r.record_pairs {
            if p.0 == p.1 || p.0 == 0 || p.1 == 0 || p.0 > n || p.1 > n {
                return Err(reject(format!("cannot record pair {p:?} of a {n}-site chain")));
            }
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        let record = RecordOptions::new(pairs, r.record_stride).map_err(invalid)?;

        if self.output.format != "csv" {
            return Err(reject(format!("output format {:?} unsupported (csv only)", self.output.format)));
        }

        Ok(Experiment {
            spec,
            field,
            noise,
            optimizer,
            target,
            pictures: r.pictures.clone(),
            dt,
            record,
            frame: r.frame,
            output: self.output.path.clone(),
        })
    }
}

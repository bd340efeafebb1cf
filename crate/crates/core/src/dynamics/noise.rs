//! Ornstein-Uhlenbeck bath fields sampled on a uniform grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::chain::NoiseParams;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    /// Number of sample points.
    pub len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::arg(format!("grid step {dt} must be positive")));
        }
        Ok(Self { t0, dt, len })
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }
}

/// One realisation of the three bath fields `B_x, B_y, B_z`.
#[derive(Clone, Debug, PartialEq)]
pub struct OuPath {
    pub grid: TimeGrid,
    pub values: [Vec<f64>; 3],
    pub params: NoiseParams,
}

impl OuPath {
    /// `(B_x, B_y, B_z)` at grid point `i`.
    pub fn at(&self, i: usize) -> [f64; 3] {
        [self.values[0][i], self.values[1][i], self.values[2][i]]
    }
}

/// Exact discretisation of a stationary OU process:
/// `B_{n+1} = B_n e^{-dt/tau} + sigma sqrt(1 - e^{-2 dt/tau}) xi_n`, `B_0 ~ N(0, sigma^2)`.
///
/// Axis `k` (0, 1, 2) draws from ChaCha20 stream `stream_base + k` of the
/// seed, so a path is a pure function of `(seed, stream_base, grid)`.
pub fn ou_path(params: &NoiseParams, grid: TimeGrid, stream_base: u64) -> Result<OuPath> {
    params.validate()?;
    let decay = (-grid.dt / params.correlation_time).exp();
    let kick = params.std_dev * (1.0 - decay * decay).sqrt();
    let axis = |k: u64| -> Vec<f64> {
        if params.std_dev == 0.0 {
            return vec![0.0; grid.len];
        }
        let mut rng = ChaCha20Rng::seed_from_u64(params.seed);
        rng.set_stream(stream_base.wrapping_add(k));
        let mut out = Vec::with_capacity(grid.len);
        let mut b = params.std_dev * rng.sample::<f64, _>(StandardNormal);
        for _ in 0..grid.len {
            out.push(b);
            b = b * decay + kick * rng.sample::<f64, _>(StandardNormal);
        }
        out
    };
    Ok(OuPath { grid, values: [axis(0), axis(1), axis(2)], params: *params })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_silent() {
        let p = NoiseParams::new(0.5, 0.0, 1, 3).unwrap();
        let path = ou_path(&p, TimeGrid::new(0.0, 0.01, 100).unwrap(), 0).unwrap();
        assert!(path.values.iter().flatten().all(|&b| b == 0.0));
    }

    #[test]
    fn deterministic_and_stream_separated() {
        let p = NoiseParams::new(0.5, 2.0, 1, 42).unwrap();
        let grid = TimeGrid::new(0.0, 0.01, 500).unwrap();
        let a = ou_path(&p, grid, 0).unwrap();
        let b = ou_path(&p, grid, 0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values[0], a.values[1]);
        let c = ou_path(&p, grid, 3).unwrap();
        assert_ne!(a.values[0], c.values[0]);
        let other_seed = ou_path(&NoiseParams { seed: 43, ..p }, grid, 0).unwrap();
        assert_ne!(a.values[0], other_seed.values[0]);
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(TimeGrid::new(0.0, 0.0, 10).is_err());
    }
}

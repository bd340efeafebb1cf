use ddspin::chain::NoiseParams;
use ddspin::dynamics::{ou_path, TimeGrid};

fn stats(values: &[f64], lag: usize) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / n;
    let pairs = values.len() - lag;
    let cov = (0..pairs).map(|i| (values[i] - mean) * (values[i + lag] - mean)).sum::<f64>() / pairs as f64;
    (mean, var, cov)
}

#[test]
fn stationary_moments() {
    let params = NoiseParams::new(0.5, 2.0, 1, 17).unwrap();
    let grid = TimeGrid::new(0.0, params.correlation_time, 1_000_000).unwrap();
    let path = ou_path(&params, grid, 0).unwrap();
    for axis in &path.values {
        let (mean, var, cov) = stats(axis, 1);
        assert!(mean.abs() < 0.02, "mean = {mean}");
        assert!((var / 4.0 - 1.0).abs() < 0.03, "variance = {var}");
        let expected = 4.0 * (-1.0f64).exp();
        assert!((cov / expected - 1.0).abs() < 0.05, "lag-tau covariance = {cov}, expected {expected}");
    }
}

#[test]
fn fine_grid_autocorrelation() {
    let params = NoiseParams::new(0.5, 2.0, 1, 5).unwrap();
    let dt = 0.05;
    let grid = TimeGrid::new(0.0, dt, 1_000_000).unwrap();
    let path = ou_path(&params, grid, 9).unwrap();
    let lag = (params.correlation_time / dt).round() as usize;
    let (_, var, cov) = stats(&path.values[2], lag);
    assert!((var / 4.0 - 1.0).abs() < 0.03, "variance = {var}");
    assert!((cov / (4.0 * (-1.0f64).exp()) - 1.0).abs() < 0.05, "covariance = {cov}");
}

#[test]
fn axes_are_uncorrelated() {
    let params = NoiseParams::new(0.5, 2.0, 1, 3).unwrap();
    let path = ou_path(&params, TimeGrid::new(0.0, 0.5, 200_000).unwrap(), 0).unwrap();
    let n = path.grid.len as f64;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let cross = path.values[a].iter().zip(&path.values[b]).map(|(x, y)| x * y).sum::<f64>() / n;
        assert!(cross.abs() < 0.1, "axes {a},{b}: {cross}");
    }
}

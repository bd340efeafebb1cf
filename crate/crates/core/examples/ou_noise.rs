//! Sample statistics of the Ornstein-Uhlenbeck bath fields.

use ddspin::chain::NoiseParams;
use ddspin::dynamics::{ou_path, TimeGrid};

fn main() -> ddspin::Result<()> {
    let params = NoiseParams::new(0.5, 2.0, 1, 7)?;
    let dt = 0.01;
    let path = ou_path(&params, TimeGrid::new(0.0, dt, 400_000)?, 0)?;
    let b = &path.values[0];
    let n = b.len() as f64;
    let mean = b.iter().sum::<f64>() / n;
    let var = b.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    println!("mean {mean:+.4}, variance {var:.4} (sigma^2 = {})", params.std_dev.powi(2));
    for lag_t in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let lag = (lag_t / dt).round() as usize;
        let cov = (0..b.len() - lag).map(|i| (b[i] - mean) * (b[i + lag] - mean)).sum::<f64>() / (b.len() - lag) as f64;
        let expected = var * (-lag_t / params.correlation_time).exp();
        println!("lag {lag_t:4.2}: autocovariance {cov:.4}, sigma^2 exp(-lag / tau) = {expected:.4}");
    }
    Ok(())
}

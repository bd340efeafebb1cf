use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::quantum::{hermitian_eigen, Operator, StateVector, C64};

/// `psi <- exp(-i H dt) psi` for a Hermitian `H`.
pub fn exponential_step(h: &Operator, dt: f64, psi: &DVector<C64>) -> Result<DVector<C64>> {
    Ok(hermitian_eigen(h)?.evolve(dt, psi))
}

/// Midpoint-exponential integration of `i d psi/dt = H(t) psi` from `t0` to `t1`.
///
/// Each step applies `exp(-i H(t + dt/2) dt)`; a shorter final step covers
/// any remainder. Returns `(t, psi(t))` including the initial point.
pub fn integrate_schrodinger<F>(mut hamiltonian: F, psi0: &StateVector, t0: f64, t1: f64, dt: f64) -> Result<Vec<(f64, StateVector)>>
where
    F: FnMut(f64) -> Operator,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::arg(format!("time step {dt} must be positive")));
    }
    if t1 < t0 {
        return Err(Error::arg("integration interval runs backwards"));
    }
    let span = t1 - t0;
    let full = ((span / dt) * (1.0 + 1e-12)).floor() as usize;
    let remainder = span - full as f64 * dt;
    let mut out = Vec::with_capacity(full + 2);
    let mut psi = psi0.amplitudes().clone();
    out.push((t0, psi0.clone()));
    let mut do_step = |start: f64, h: f64, psi: &mut DVector<C64>| -> Result<()> {
        let gen = hamiltonian(start + 0.5 * h);
        if gen.nrows() != psi.len() {
            return Err(Error::arg("Hamiltonian dimension does not match the state"));
        }
        *psi = exponential_step(&gen, h, psi)?;
        Ok(())
    };
    for q in 0..full {
        let start = t0 + q as f64 * dt;
        do_step(start, dt, &mut psi)?;
        out.push((start + dt, StateVector::from_amplitudes(psi0.n_sites(), psi.clone())?));
    }
    if remainder > 1e-12 * dt {
        do_step(t0 + full as f64 * dt, remainder, &mut psi)?;
        out.push((t1, StateVector::from_amplitudes(psi0.n_sites(), psi)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{c, evolve_exact, Pauli};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_generator_matches_exact() {
        let h = Pauli::X.matrix() + Pauli::Z.matrix().scale(0.3);
        let psi0 = StateVector::from_bits("0").unwrap();
        let traj = integrate_schrodinger(|_| h.clone(), &psi0, 0.0, 2.0, 0.02).unwrap();
        assert_eq!(traj.len(), 101);
        let exact = evolve_exact(&h, 2.0, &psi0).unwrap();
        let last = &traj.last().unwrap().1;
        assert_abs_diff_eq!((last.amplitudes() - exact.amplitudes()).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn partial_final_step() {
        let h = Pauli::Y.matrix();
        let psi0 = StateVector::from_bits("0").unwrap();
        let traj = integrate_schrodinger(|_| h.clone(), &psi0, 0.0, 1.05, 0.1).unwrap();
        assert_eq!(traj.len(), 12);
        assert_abs_diff_eq!(traj.last().unwrap().0, 1.05, epsilon = 1e-15);
        let exact = evolve_exact(&h, 1.05, &psi0).unwrap();
        assert_abs_diff_eq!((traj.last().unwrap().1.amplitudes() - exact.amplitudes()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn second_order_convergence() {
        let h = |t: f64| {
            Pauli::X.matrix().scale(1.0 + 0.5 * (3.0 * t).sin())
                + Pauli::Z.matrix().scale(0.7 * (2.0 * t).cos())
                + Pauli::Y.matrix().scale(0.2 * t)
        };
        let psi0 = StateVector::from_amplitudes(1, DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)])).unwrap();
        let end = |dt: f64| integrate_schrodinger(h, &psi0, 0.0, 2.0, dt).unwrap().pop().unwrap().1;
        let reference = end(0.1 / 8.0);
        let e1 = (end(0.1).amplitudes() - reference.amplitudes()).norm();
        let e2 = (end(0.05).amplitudes() - reference.amplitudes()).norm();
        let ratio = e1 / e2;
        assert!((3.2..=5.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn norm_is_preserved() {
        let h = |t: f64| Pauli::X.matrix().scale(t.cos() * 5.0) + Pauli::Z.matrix();
        let psi0 = StateVector::from_bits("1").unwrap();
        for (_, psi) in integrate_schrodinger(h, &psi0, 0.0, 3.0, 0.01).unwrap() {
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        }
    }
}

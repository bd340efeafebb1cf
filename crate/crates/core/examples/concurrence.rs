//! Concurrence, Bell fidelity and purity of a few textbook two-qubit states.

use ddspin::metrics::{bell_fidelity, concurrence, purity};
use ddspin::quantum::{c, Operator, StateVector};
use nalgebra::DVector;

fn main() -> ddspin::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::from_amplitudes(2, DVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, s)]))?.density_matrix();
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let werner = bell.scale(p) + Operator::identity(4, 4).scale((1.0 - p) / 4.0);
        println!(
            "p = {p:.3}: C = {:.4}, F = {:.4}, purity = {:.4}",
            concurrence(&werner)?,
            bell_fidelity(&werner, std::f64::consts::FRAC_PI_2)?,
            purity(&werner)?
        );
    }
    for theta in [0.0, 0.3, 0.6, std::f64::consts::FRAC_PI_4] {
        let psi = StateVector::from_amplitudes(2, DVector::from_vec(vec![c(theta.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(theta.sin(), 0.0)]))?;
        println!("cos {theta:.3} |00> + sin {theta:.3} |11>: C = {:.4} (sin 2 theta = {:.4})", concurrence(&psi.density_matrix())?, (2.0 * theta).sin());
    }
    Ok(())
}

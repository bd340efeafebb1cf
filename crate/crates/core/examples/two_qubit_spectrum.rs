//! Spectrum and block amplitudes of the induced XY interaction.

use ddspin::effective::{two_qubit_effective, xy_amplitudes, xy_eigenvalues};
use ddspin::quantum::hermitian_eigen;
use ddspin::scheme::block_unitaries;

fn main() -> ddspin::Result<()> {
    let h = two_qubit_effective([1.0, 1.0, 0.0]);
    println!("H =\n{:.3}", h.matrix);
    let eig = hermitian_eigen(&h.matrix)?;
    println!("numeric   {:?}", eig.values.as_slice());
    println!("analytic  {:?}", xy_eigenvalues());
    println!("parity leakage {:.1e}", h.parity_leakage());

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "|gamma1|", "|gamma2|", "|eta1|", "|eta2|");
    for i in 0..=8 {
        let t = 0.5 * i as f64;
        let a = xy_amplitudes(t);
        let b = block_unitaries(&h, t)?;
        assert!((a.gamma2 - b.flip_even()).norm() < 1e-12);
        println!("{t:6.2} {:10.6} {:10.6} {:10.6} {:10.6}", a.gamma1.norm(), a.gamma2.norm(), a.eta1.norm(), a.eta2.norm());
    }
    Ok(())
}

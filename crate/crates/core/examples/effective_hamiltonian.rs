//! Period averages of the chain Hamiltonian under constant and staggered fields.

use ddspin::chain::{build_h0, staggered_assignment, ChainSpec, FieldAssignment, FieldPair};
use ddspin::effective::{average_hamiltonian_numeric, closed_form_i, two_qubit_effective, DEFAULT_QUADRATURE};
use ddspin::quantum::max_abs;

fn main() -> ddspin::Result<()> {
    let t_c = 0.05;

    // Same field on both sites: one induced two-qubit interaction survives.
    let constant = FieldAssignment::constant(2, FieldPair::doubled(1), t_c)?;
    for zeta in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0], [1.1, 1.0, 1.0]] {
        let numeric = average_hamiltonian_numeric(&ChainSpec::uniform(2, zeta)?, &constant, DEFAULT_QUADRATURE)?;
        let closed = two_qubit_effective(zeta).matrix;
        println!("zeta = {zeta:?}: |quadrature - closed form| = {:.1e}", max_abs(&(numeric - closed)));
    }
    for k in 1..=3 {
        println!("I_{k} =\n{:.3}", closed_form_i(k)?.map(|z| z.re));
    }

    // Alternating fields remove everything, except at resonant integer ratios.
    let spec = ChainSpec::uniform(4, [1.0, 0.7, 0.3])?;
    let h0 = max_abs(&build_h0(&spec));
    for (n_x, m_x) in [(1, 2), (2, 3), (1, 4), (1, 3)] {
        let avg = average_hamiltonian_numeric(&spec, &staggered_assignment(4, n_x, m_x, t_c)?, DEFAULT_QUADRATURE)?;
        println!("staggered ({n_x}, {m_x}): |H_avg| / |H0| = {:.2e}", max_abs(&avg) / h0);
    }
    Ok(())
}

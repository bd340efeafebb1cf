//! Period-averaged (effective) Hamiltonians.
//!
//! Two independent routes are provided: a quadrature over one control period
//! built from the per-site control rotations, and closed-form two-qubit
//! operators valid for the constant configuration with `fy = 2 fx`. The
//! quadrature is the oracle for the closed forms.

use nalgebra::DVector;

use crate::chain::{site_rotation, ChainSpec, FieldAssignment, FieldPair};
use crate::error::{Error, Result};
use crate::quantum::{c, embed_pair_op, embed_site_op, is_hermitian, kron, max_abs, Operator, Pauli, C64, ZERO};

/// Default number of quadrature intervals over one period.
pub const DEFAULT_QUADRATURE: usize = 2048;

/// Coefficients `(c_x, c_y, c_z)` of `U_c^dag s_k U_c` for one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatedPauli {
    pub coefficients: [f64; 3],
}

impl RotatedPauli {
    pub fn to_operator(&self) -> Operator {
        Pauli::ALL
            .iter()
            .zip(self.coefficients)
            .fold(Operator::zeros(2, 2), |acc, (p, w)| acc + p.matrix().scale(w))
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Closed-form rotated Pauli operator for a site driven by `pair`.
pub fn h_rotated(k: usize, pair: FieldPair, omega: f64, t: f64) -> Result<RotatedPauli> {
    let (sa, ca) = (2.0 * omega * pair.fx as f64 * t).sin_cos();
    let (sb, cb) = (2.0 * omega * pair.fy as f64 * t).sin_cos();
    let coefficients = match Pauli::from_index(k)? {
        Pauli::X => [cb, 0.0, -sb],
        Pauli::Y => [sa * sb, ca, sa * cb],
        Pauli::Z => [ca * sb, -sa, ca * cb],
    };
    Ok(RotatedPauli { coefficients })
}

/// Composite Simpson weights over `n` intervals (n + 1 nodes), normalised to sum to 1.
fn simpson_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w / (3.0 * n as f64)
        })
        .collect()
}

fn check_quadrature(n_quad: usize) -> Result<()> {
    if n_quad < 64 || !n_quad.is_multiple_of(2) {
        return Err(Error::arg(format!("quadrature size {n_quad} must be even and at least 64")));
    }
    Ok(())
}

/// `(1/t_c) int_0^t_c U_c^dag H_0 U_c dt` by composite Simpson quadrature.
///
/// Each bond term is conjugated by the two site rotations it touches, so the
/// cost is independent of the Hilbert-space dimension until the final embedding.
pub fn average_hamiltonian_numeric(spec: &ChainSpec, assign: &FieldAssignment, n_quad: usize) -> Result<Operator> {
    check_quadrature(n_quad)?;
    let n = spec.n_sites();
    if assign.n_sites() != n {
        return Err(Error::arg(format!(
            "assignment covers {} sites, chain has {n}",
            assign.n_sites()
        )));
    }
    let omega = assign.omega();
    let paulis: Vec<Operator> = Pauli::ALL.iter().map(|p| p.matrix()).collect();
    let weights = simpson_weights(n_quad);
    let mut bonds = vec![Operator::zeros(4, 4); n - 1];
    for (q, w) in weights.iter().enumerate() {
        let t = assign.t_c() * q as f64 / n_quad as f64;
        let rotated: Vec<Vec<Operator>> = assign
            .pairs()
            .iter()
            .map(|&pair| {
                let u = site_rotation(pair, omega, t);
                let ud = u.adjoint();
                paulis.iter().map(|s| &ud * s * &u).collect()
            })
            .collect();
        for (j, zeta) in spec.couplings().iter().enumerate() {
            for k in 0..3 {
                if zeta[k] != 0.0 {
                    bonds[j] += kron(&rotated[j][k], &rotated[j + 1][k]).scale(w * zeta[k]);
                }
            }
        }
    }
    let dim = 1 << n;
    let mut h = Operator::zeros(dim, dim);
    for (j, bond) in bonds.iter().enumerate() {
        h += embed_pair_op(bond, j + 1, n)?;
    }
    Ok(h)
}

/// `int_0^t_c U_c^dag s_k^(site) U_c dt` (not normalised by the period).
pub fn decoupling_integral(assign: &FieldAssignment, site: usize, k: usize, n_quad: usize) -> Result<Operator> {
    check_quadrature(n_quad)?;
    let n = assign.n_sites();
    if site == 0 || site > n {
        return Err(Error::arg(format!("site {site} outside an assignment of {n} sites")));
    }
    let sigma = Pauli::from_index(k)?.matrix();
    let pair = assign.pairs()[site - 1];
    let omega = assign.omega();
    let mut acc = Operator::zeros(2, 2);
    for (q, w) in simpson_weights(n_quad).iter().enumerate() {
        let t = assign.t_c() * q as f64 / n_quad as f64;
        let u = site_rotation(pair, omega, t);
        acc += (u.adjoint() * &sigma * u).scale(*w);
    }
    embed_site_op(&acc.scale(assign.t_c()), site, n)
}

fn pauli_pair(a: Pauli, b: Pauli) -> Operator {
    kron(&a.matrix(), &b.matrix())
}

/// Closed-form bond averages for the constant configuration with `fy = 2 fx`:
///
/// ```text
/// I_1 = (XX + ZZ) / 2
/// I_2 = (XX + 2 YY + XY + YX + ZZ) / 4
/// I_3 = (XX + 2 YY - XY - YX + ZZ) / 4
/// ```
pub fn closed_form_i(k: usize) -> Result<Operator> {
    use Pauli::{X, Y, Z};
    let xx = pauli_pair(X, X);
    let yy = pauli_pair(Y, Y);
    let zz = pauli_pair(Z, Z);
    let xy = pauli_pair(X, Y) + pauli_pair(Y, X);
    Ok(match Pauli::from_index(k)? {
        X => (xx + zz).scale(0.5),
        Y => (xx + yy.scale(2.0) + xy + zz).scale(0.25),
        Z => (xx + yy.scale(2.0) - xy + zz).scale(0.25),
    })
}

/// Induced two-qubit interaction `sum_k zeta_k I_k` on one bond.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitEffective {
    pub matrix: Operator,
    pub couplings: [f64; 3],
}

/// Basis indices of the even `{|00>, |11>}` and odd `{|01>, |10>}` parity blocks.
pub const EVEN_BLOCK: [usize; 2] = [0, 3];
pub const ODD_BLOCK: [usize; 2] = [1, 2];

impl TwoQubitEffective {
    /// Restriction to `span{|00>, |11>}`.
    pub fn even_block(&self) -> Operator {
        self.block(EVEN_BLOCK)
    }

    /// Restriction to `span{|01>, |10>}`.
    pub fn odd_block(&self) -> Operator {
        self.block(ODD_BLOCK)
    }

    fn block(&self, idx: [usize; 2]) -> Operator {
        Operator::from_fn(2, 2, |r, s| self.matrix[(idx[r], idx[s])])
    }

    /// Largest matrix element coupling the two parity blocks.
    pub fn parity_leakage(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &e in &EVEN_BLOCK {
            for &o in &ODD_BLOCK {
                worst = worst.max(self.matrix[(e, o)].norm()).max(self.matrix[(o, e)].norm());
            }
        }
        worst
    }
}

pub fn two_qubit_effective(zeta: [f64; 3]) -> TwoQubitEffective {
    let matrix = (1..=3).zip(zeta).fold(Operator::zeros(4, 4), |acc, (k, z)| {
        acc + closed_form_i(k).expect("k in range").scale(z)
    });
    debug_assert!(is_hermitian(&matrix, 1e-14));
    TwoQubitEffective { matrix, couplings: zeta }
}

/// `alpha = (1 + 2i) / sqrt(10)`.
pub fn xy_alpha() -> C64 {
    c(1.0, 2.0) / 10f64.sqrt()
}

/// `beta = 1 / sqrt(2)`.
pub fn xy_beta() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

/// Ascending spectrum of the XY two-qubit interaction.
pub fn xy_eigenvalues() -> [f64; 4] {
    let s5 = 5f64.sqrt();
    [-2.0, (3.0 - s5) / 4.0, 0.5, (3.0 + s5) / 4.0]
}

/// Eigenvectors `|e_1>..|e_4>` of the XY two-qubit interaction in the
/// `|00>, |01>, |10>, |11>` basis, matching [`xy_eigenvalues`].
pub fn xy_eigenvectors() -> [DVector<C64>; 4] {
    let a = xy_alpha().conj();
    let b = c(xy_beta(), 0.0);
    [
        DVector::from_vec(vec![ZERO, -b, b, ZERO]),
        DVector::from_vec(vec![a, ZERO, ZERO, -b]),
        DVector::from_vec(vec![ZERO, b, b, ZERO]),
        DVector::from_vec(vec![a, ZERO, ZERO, b]),
    ]
}

/// Analytic block amplitudes of `exp(-i H t)` at the XY point:
/// `|00> -> gamma1 |00> + gamma2 |11>` and `|10> -> eta1 |01> + eta2 |10>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XyAmplitudes {
    pub gamma1: C64,
    pub gamma2: C64,
    pub eta1: C64,
    pub eta2: C64,
}

pub fn xy_amplitudes(t: f64) -> XyAmplitudes {
    let [l1, l2, l3, l4] = xy_eigenvalues();
    let ph = |l: f64| C64::from_polar(1.0, -l * t);
    let alpha = xy_alpha();
    let beta = xy_beta();
    XyAmplitudes {
        gamma1: (ph(l4) + ph(l2)) * alpha.norm_sqr(),
        gamma2: alpha * beta * (ph(l4) - ph(l2)),
        eta1: -(ph(l1) - ph(l3)) * (beta * beta),
        eta2: (ph(l1) + ph(l3)) * (beta * beta),
    }
}

/// Norm of the difference between two operators relative to a reference scale.
pub fn relative_deviation(a: &Operator, b: &Operator, scale: f64) -> f64 {
    max_abs(&(a - b)) / scale.max(f64::MIN_POSITIVE)
}

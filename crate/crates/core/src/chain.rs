//! The physical model: chain Hamiltonian, classical system-bath coupling and
//! the periodic control fields.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{c, embed_site_op, identity, kron, Operator, Pauli, MAX_SITES};

/// Open chain of `n_sites` spins with one `(zeta_x, zeta_y, zeta_z)` triple per bond.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n_sites: usize,
    couplings: Vec<[f64; 3]>,
}

impl ChainSpec {
    pub fn new(n_sites: usize, couplings: Vec<[f64; 3]>) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&n_sites) {
            return Err(Error::arg(format!("chain length {n_sites} outside 2..={MAX_SITES}")));
        }
        if couplings.len() != n_sites - 1 {
            return Err(Error::arg(format!(
                "{} coupling triples for an open chain of {n_sites} sites (need {})",
                couplings.len(),
                n_sites - 1
            )));
        }
        if couplings.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::arg("non-finite coupling"));
        }
        Ok(Self { n_sites, couplings })
    }

    pub fn uniform(n_sites: usize, zeta: [f64; 3]) -> Result<Self> {
        Self::new(n_sites, vec![zeta; n_sites.saturating_sub(1)])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> &[[f64; 3]] {
        &self.couplings
    }

    /// Couplings of the bond `(j, j + 1)`.
    pub fn bond(&self, j: usize) -> Result<[f64; 3]> {
        if j == 0 || j >= self.n_sites {
            return Err(Error::arg(format!("bond {j} outside a chain of {} sites", self.n_sites)));
        }
        Ok(self.couplings[j - 1])
    }

    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().flatten().fold(0.0, |m, z| m.max(z.abs()))
    }
}

/// Integers of the control field at one site: static-plus-oscillating
/// rotation rates `omega * fx` about x and `omega * fy` about y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldPair {
    pub fx: i64,
    pub fy: i64,
}

impl FieldPair {
    pub const fn new(fx: i64, fy: i64) -> Self {
        Self { fx, fy }
    }

    /// `(n, 2n)`, the pair shape produced by every scheme-generated assignment.
    pub const fn doubled(n: i64) -> Self {
        Self { fx: n, fy: 2 * n }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldAssignment {
    pairs: Vec<FieldPair>,
    t_c: f64,
}

impl FieldAssignment {
    pub fn new(pairs: Vec<FieldPair>, t_c: f64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::arg("field assignment needs at least one site"));
        }
        if !(t_c > 0.0 && t_c.is_finite()) {
            return Err(Error::arg(format!("control period {t_c} must be positive")));
        }
        if let Some(pos) = pairs.iter().position(|p| p.fx == p.fy) {
            return Err(Error::arg(format!(
                "site {} has fx = fy = {}; first-order decoupling needs fx != fy",
                pos + 1,
                pairs[pos].fx
            )));
        }
        Ok(Self { pairs, t_c })
    }

    /// The same pair at every site.
    pub fn constant(n_sites: usize, pair: FieldPair, t_c: f64) -> Result<Self> {
        Self::new(vec![pair; n_sites], t_c)
    }

    pub fn pairs(&self) -> &[FieldPair] {
        &self.pairs
    }

    pub fn n_sites(&self) -> usize {
        self.pairs.len()
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    pub fn omega(&self) -> f64 {
        TAU / self.t_c
    }
}

/// Ornstein-Uhlenbeck parameters for the classical bath fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub correlation_time: f64,
    pub std_dev: f64,
    pub n_trajectories: usize,
    pub seed: u64,
}

impl NoiseParams {
    pub fn new(correlation_time: f64, std_dev: f64, n_trajectories: usize, seed: u64) -> Result<Self> {
        let p = Self { correlation_time, std_dev, n_trajectories, seed };
        p.validate()?;
        Ok(p)
    }

    /// A single deterministic trajectory without bath fields.
    pub fn noiseless() -> Self {
        Self { correlation_time: 1.0, std_dev: 0.0, n_trajectories: 1, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.correlation_time > 0.0) {
            return Err(Error::arg("correlation time must be positive"));
        }
        if !(self.std_dev >= 0.0) {
            return Err(Error::arg("noise standard deviation must be non-negative"));
        }
        if self.n_trajectories == 0 {
            return Err(Error::arg("at least one trajectory is required"));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.std_dev == 0.0
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self { correlation_time: 0.5, std_dev: 2.0, n_trajectories: 32, seed: 0 }
    }
}

/// Nearest-neighbour chain Hamiltonian `sum_j sum_k zeta_jk s_k^(j) s_k^(j+1)`.
pub fn build_h0(spec: &ChainSpec) -> Operator {
    let n = spec.n_sites();
    let dim = 1 << n;
    let mut h = Operator::zeros(dim, dim);
    for (j, zeta) in spec.couplings().iter().enumerate() {
        let left = identity(1 << j);
        let right = identity(1 << (n - j - 2));
        for (axis, &z) in Pauli::ALL.iter().zip(zeta) {
            if z == 0.0 {
                continue;
            }
            let s = axis.matrix();
            let bond = kron(&kron(&left, &kron(&s, &s)), &right);
            h += bond.scale(z);
        }
    }
    h
}

/// `sum_j sum_k B_k s_k^(j)` with the same bath value on every site.
pub fn build_hsb(n_sites: usize, b: [f64; 3]) -> Result<Operator> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(Error::arg(format!("{n_sites} sites outside 1..={MAX_SITES}")));
    }
    let local = Pauli::ALL
        .iter()
        .zip(b)
        .fold(Operator::zeros(2, 2), |acc, (p, bk)| acc + p.matrix().scale(bk));
    let dim = 1 << n_sites;
    let mut h = Operator::zeros(dim, dim);
    for site in 1..=n_sites {
        h += embed_site_op(&local, site, n_sites)?;
    }
    Ok(h)
}

/// Odd sites get `(n_x, 2 n_x)`, even sites `(m_x, 2 m_x)`.
pub fn staggered_assignment(n_sites: usize, n_x: i64, m_x: i64, t_c: f64) -> Result<FieldAssignment> {
    check_integers(n_x, m_x)?;
    let pairs = (1..=n_sites)
        .map(|s| if s % 2 == 1 { FieldPair::doubled(n_x) } else { FieldPair::doubled(m_x) })
        .collect();
    FieldAssignment::new(pairs, t_c)
}

/// Sites `active_left` and `active_left + 1` share a pair; every other
/// neighbouring pair differs. Site 1 always carries `(n_x, 2 n_x)` and the
/// pattern alternates left to right, repeating once across the active bond.
pub fn pair_assignment(n_sites: usize, active_left: usize, n_x: i64, m_x: i64, t_c: f64) -> Result<FieldAssignment> {
    check_integers(n_x, m_x)?;
    if active_left == 0 || active_left >= n_sites {
        return Err(Error::arg(format!(
            "active pair ({active_left}, {}) outside a chain of {n_sites} sites",
            active_left + 1
        )));
    }
    let a = FieldPair::doubled(n_x);
    let b = FieldPair::doubled(m_x);
    let mut pairs = Vec::with_capacity(n_sites);
    let mut current = a;
    pairs.push(current);
    for site in 2..=n_sites {
        if site != active_left + 1 {
            current = if current == a { b } else { a };
        }
        pairs.push(current);
    }
    FieldAssignment::new(pairs, t_c)
}

fn check_integers(n_x: i64, m_x: i64) -> Result<()> {
    if n_x == m_x {
        return Err(Error::arg(format!(
            "n_x = m_x = {n_x} gives every neighbouring pair the same field"
        )));
    }
    if n_x == 0 || m_x == 0 {
        return Err(Error::arg("field integers must be nonzero"));
    }
    Ok(())
}

/// `exp(i omega fx s_x t) exp(i omega fy s_y t)` for a single site.
pub fn site_rotation(pair: FieldPair, omega: f64, t: f64) -> Operator {
    let a = omega * pair.fx as f64 * t;
    let b = omega * pair.fy as f64 * t;
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    // (ca + i sa X)(cb + i sb Y)
    let rx = Operator::from_row_slice(2, 2, &[c(ca, 0.0), c(0.0, sa), c(0.0, sa), c(ca, 0.0)]);
    let ry = Operator::from_row_slice(2, 2, &[c(cb, 0.0), c(sb, 0.0), c(-sb, 0.0), c(cb, 0.0)]);
    rx * ry
}

/// Per-site rotations at time `t`, site 1 first.
pub fn site_rotations(assign: &FieldAssignment, t: f64) -> Vec<Operator> {
    let omega = assign.omega();
    assign.pairs().iter().map(|&p| site_rotation(p, omega, t)).collect()
}

/// Tensor product of the per-site rotations.
pub fn control_unitary(assign: &FieldAssignment, t: f64) -> Operator {
    site_rotations(assign, t)
        .iter()
        .fold(identity(1), |acc, u| kron(&acc, u))
}

/// Single-site term of the control Hamiltonian.
pub fn site_control_hamiltonian(pair: FieldPair, omega: f64, t: f64) -> Operator {
    let fx = pair.fx as f64;
    let fy = pair.fy as f64;
    let (s, co) = (2.0 * omega * fx * t).sin_cos();
    let z = Pauli::Z.matrix().scale(omega * fy * s);
    let y = Pauli::Y.matrix().scale(-omega * fy * co);
    let x = Pauli::X.matrix().scale(-omega * fx);
    z + y + x
}

/// Hamiltonian generating [`control_unitary`]: `i dU/dt = H_c U`.
pub fn control_hamiltonian(assign: &FieldAssignment, t: f64) -> Operator {
    let n = assign.n_sites();
    let omega = assign.omega();
    let dim = 1 << n;
    let mut h = Operator::zeros(dim, dim);
    for (idx, &pair) in assign.pairs().iter().enumerate() {
        let local = site_control_hamiltonian(pair, omega, t);
        h += embed_site_op(&local, idx + 1, n).expect("site index in range");
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{is_hermitian, is_unitary, max_abs, trace, I, ZERO};
    use approx::assert_abs_diff_eq;

    fn xy() -> [f64; 3] {
        [1.0, 1.0, 0.0]
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::new(1, vec![]).is_err());
        assert!(ChainSpec::new(3, vec![xy()]).is_err());
        assert!(ChainSpec::new(3, vec![xy(), xy(), xy()]).is_err());
        assert!(ChainSpec::uniform(3, xy()).is_ok());
        assert!(ChainSpec::uniform(3, xy()).unwrap().bond(3).is_err());
    }

    #[test]
    fn h0_examples() {
        let zero = ChainSpec::uniform(3, [0.0; 3]).unwrap();
        assert_eq!(max_abs(&build_h0(&zero)), 0.0);

        // XX + YY on two sites: 2 on the |01>,|10> off-diagonal.
        let h = build_h0(&ChainSpec::uniform(2, xy()).unwrap());
        for r in 0..4 {
            for s in 0..4 {
                let expected = if (r, s) == (1, 2) || (r, s) == (2, 1) { 2.0 } else { 0.0 };
                assert_abs_diff_eq!(h[(r, s)].re, expected, epsilon = 1e-15);
                assert_abs_diff_eq!(h[(r, s)].im, 0.0, epsilon = 1e-15);
            }
        }

        let h = build_h0(&ChainSpec::uniform(3, xy()).unwrap());
        assert_abs_diff_eq!(h[(0b010, 0b100)].re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(0b001, 0b010)].re, 2.0, epsilon = 1e-15);
        assert!(is_hermitian(&h, 1e-15));
        assert_abs_diff_eq!(trace(&h).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hsb_examples() {
        assert_eq!(max_abs(&build_hsb(3, [0.0; 3]).unwrap()), 0.0);
        let b = 0.37;
        assert_eq!(build_hsb(1, [b, 0.0, 0.0]).unwrap(), Pauli::X.matrix().scale(b));
        let h = build_hsb(2, [0.0, 0.0, b]).unwrap();
        let expected = Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(2.0 * b, 0.0),
            ZERO,
            ZERO,
            c(-2.0 * b, 0.0),
        ]));
        assert_abs_diff_eq!(max_abs(&(h - expected)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn staggered_examples() {
        let a = FieldPair::new(1, 2);
        let b = FieldPair::new(2, 4);
        assert_eq!(staggered_assignment(4, 1, 2, 0.05).unwrap().pairs(), &[a, b, a, b]);
        assert_eq!(staggered_assignment(1, 1, 2, 0.05).unwrap().pairs(), &[a]);
        assert!(staggered_assignment(4, 1, 1, 0.05).is_err());
        assert!(staggered_assignment(4, 0, 1, 0.05).is_err());
    }

    #[test]
    fn pair_assignment_examples() {
        let a = FieldPair::new(1, 2);
        let b = FieldPair::new(2, 4);
        let p = |i| pair_assignment(5, i, 1, 2, 0.05).unwrap().pairs().to_vec();
        assert_eq!(p(1), vec![a, a, b, a, b]);
        assert_eq!(p(2), vec![a, b, b, a, b]);
        assert_eq!(p(4), vec![a, b, a, b, b]);
        assert!(pair_assignment(5, 5, 1, 2, 0.05).is_err());
        assert!(pair_assignment(5, 0, 1, 2, 0.05).is_err());
    }

    #[test]
    fn assignment_rejects_equal_integers() {
        assert!(FieldAssignment::new(vec![FieldPair::new(1, 1)], 0.1).is_err());
        assert!(FieldAssignment::new(vec![FieldPair::new(1, 2)], 0.0).is_err());
    }

    #[test]
    fn control_unitary_examples() {
        let assign = staggered_assignment(3, 1, 2, 0.05).unwrap();
        assert_abs_diff_eq!(max_abs(&(control_unitary(&assign, 0.0) - identity(8))), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(max_abs(&(control_unitary(&assign, 0.05) - identity(8))), 0.0, epsilon = 1e-12);

        // Closed-form exponentials: exp(i pi/2 X) exp(i pi Y) = (iX)(-1) = -iX.
        let single = FieldAssignment::new(vec![FieldPair::new(1, 2)], 1.0).unwrap();
        let u = control_unitary(&single, 0.25);
        let expected = Pauli::X.matrix().scale(-1.0) * I;
        assert_abs_diff_eq!(max_abs(&(u - expected)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn control_hamiltonian_at_zero() {
        let single = FieldAssignment::new(vec![FieldPair::new(1, 2)], 0.05).unwrap();
        let w = single.omega();
        let expected = Pauli::Y.matrix().scale(-2.0 * w) - Pauli::X.matrix().scale(w);
        assert_abs_diff_eq!(max_abs(&(control_hamiltonian(&single, 0.0) - expected)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn control_hamiltonian_generates_control_unitary() {
        let assign = pair_assignment(3, 2, 1, 2, 0.05).unwrap();
        let h_step = 1e-6;
        for &t in &[0.0031, 0.0177, 0.0412, 0.733] {
            let h = control_hamiltonian(&assign, t);
            assert!(is_hermitian(&h, 1e-12));
            let du = (control_unitary(&assign, t + h_step) - control_unitary(&assign, t - h_step)).scale(0.5 / h_step);
            let lhs = du * I;
            let rhs = &h * control_unitary(&assign, t);
            assert!(max_abs(&(lhs - rhs)) <= 1e-6 * max_abs(&h));
            assert!(is_unitary(&control_unitary(&assign, t), 1e-12));
        }
    }
}

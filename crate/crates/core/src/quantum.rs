//! Dense linear algebra over few-qubit Hilbert spaces.
//!
//! Basis convention: `|b_1 b_2 ... b_N>` with site 1 as the most significant
//! bit of the dense index, and `|0>` the +1 eigenstate of `sigma_z`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;

/// Dense complex square matrix.
pub type Operator = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest Hilbert-space dimension supported by the dense routines (2^12).
pub const MAX_SITES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Axis index `k = 1, 2, 3` for x, y, z.
    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Pauli::X),
            2 => Ok(Pauli::Y),
            3 => Ok(Pauli::Z),
            _ => Err(Error::arg(format!("Pauli index {k} outside 1..=3"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn matrix(self) -> Operator {
        match self {
            Pauli::X => Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            Pauli::Y => Operator::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
            Pauli::Z => Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// Largest entry modulus.
pub fn max_abs(a: &Operator) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn is_hermitian(a: &Operator, tol: f64) -> bool {
    a.is_square() && max_abs(&(a - a.adjoint())) <= tol
}

pub fn is_unitary(u: &Operator, tol: f64) -> bool {
    u.is_square() && max_abs(&(u.adjoint() * u - identity(u.nrows()))) <= tol
}

pub fn trace(a: &Operator) -> C64 {
    a.diagonal().iter().sum()
}

fn sites_of_dim(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Bit position of `site` (1-based) inside a dense index of an `n_sites` register.
#[inline]
pub fn site_shift(site: usize, n_sites: usize) -> usize {
    n_sites - site
}

/// Pure state of an `n_sites` qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn from_amplitudes(n_sites: usize, amplitudes: DVector<C64>) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::arg(format!("n_sites = {n_sites} outside 1..={MAX_SITES}")));
        }
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::arg(format!(
                "{} amplitudes supplied for {n_sites} sites",
                amplitudes.len()
            )));
        }
        Ok(Self { n_sites, amplitudes })
    }

    /// Computational basis state with dense index `index`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let mut v = DVector::from_element(1 << n_sites.min(MAX_SITES + 1), ZERO);
        if index >= v.len() {
            return Err(Error::arg(format!("basis index {index} out of range")));
        }
        v[index] = ONE;
        Self::from_amplitudes(n_sites, v)
    }

    /// `|0...0>`.
    pub fn all_zeros(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, 0)
    }

    /// Parse a bit string such as `"01100"` (site 1 first).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = parse_bits(bits)?;
        Self::basis(bits.len(), index)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|psi><psi|`.
    pub fn density_matrix(&self) -> Operator {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn apply(&self, op: &Operator) -> Result<StateVector> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::arg(format!(
                "operator of shape {}x{} applied to a state of dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        Ok(Self { n_sites: self.n_sites, amplitudes: op * &self.amplitudes })
    }

    /// Apply a 2x2 operator to one site in place.
    pub fn apply_site_in_place(&mut self, op: &Operator, site: usize) -> Result<()> {
        if site == 0 || site > self.n_sites {
            return Err(Error::arg(format!("site {site} outside a chain of {} sites", self.n_sites)));
        }
        if op.shape() != (2, 2) {
            return Err(Error::arg("site operator must be 2x2"));
        }
        let bit = 1usize << site_shift(site, self.n_sites);
        let (a, b, c_, d) = (op[(0, 0)], op[(0, 1)], op[(1, 0)], op[(1, 1)]);
        let amps = self.amplitudes.as_mut_slice();
        for i in (0..amps.len()).filter(|i| i & bit == 0) {
            let (lo, hi) = (amps[i], amps[i | bit]);
            amps[i] = a * lo + b * hi;
            amps[i | bit] = c_ * lo + d * hi;
        }
        Ok(())
    }

    /// Apply a 4x4 operator to the adjacent sites `(left_site, left_site + 1)` in place.
    pub fn apply_pair_in_place(&mut self, op: &Operator, left_site: usize) -> Result<()> {
        check_pair_site(left_site, self.n_sites)?;
        if op.shape() != (4, 4) {
            return Err(Error::arg("pair operator must be 4x4"));
        }
        let hi = site_shift(left_site, self.n_sites);
        let lo = hi - 1;
        let mask = (1usize << hi) | (1usize << lo);
        let amps = self.amplitudes.as_mut_slice();
        for base in 0..amps.len() {
            if base & mask != 0 {
                continue;
            }
            let idx = [base, base | (1 << lo), base | (1 << hi), base | mask];
            let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
            for (r, &i) in idx.iter().enumerate() {
                amps[i] = (0..4).map(|col| op[(r, col)] * old[col]).sum();
            }
        }
        Ok(())
    }

    /// Reduced density matrix on the ordered site pair `keep`.
    pub fn reduced_pair(&self, keep: (usize, usize)) -> Result<Operator> {
        let (a, b) = check_keep(keep, self.n_sites)?;
        let sa = site_shift(a, self.n_sites);
        let sb = site_shift(b, self.n_sites);
        let mask = (1usize << sa) | (1usize << sb);
        let amps = self.amplitudes.as_slice();
        let mut rho = Operator::zeros(4, 4);
        for base in (0..amps.len()).filter(|i| i & mask == 0) {
            let local: [C64; 4] = std::array::from_fn(|r| {
                let bit_a = (r >> 1) & 1;
                let bit_b = r & 1;
                amps[base | (bit_a << sa) | (bit_b << sb)]
            });
            for r in 0..4 {
                for s in 0..4 {
                    rho[(r, s)] += local[r] * local[s].conj();
                }
            }
        }
        Ok(rho)
    }
}

pub fn parse_bits(bits: &str) -> Result<usize> {
    if bits.is_empty() || bits.len() > MAX_SITES {
        return Err(Error::arg(format!("bit string {bits:?} has unsupported length")));
    }
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::arg(format!("bit string {bits:?} contains {ch:?}"))),
    })
}

pub fn format_bits(index: usize, n_sites: usize) -> String {
    (1..=n_sites)
        .map(|site| if (index >> site_shift(site, n_sites)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn check_pair_site(left_site: usize, n_sites: usize) -> Result<()> {
    if left_site == 0 || left_site >= n_sites {
        return Err(Error::arg(format!(
            "pair ({left_site}, {}) outside a chain of {n_sites} sites",
            left_site + 1
        )));
    }
    Ok(())
}

fn check_keep(keep: (usize, usize), n_sites: usize) -> Result<(usize, usize)> {
    let (a, b) = keep;
    if a == b || a == 0 || b == 0 || a > n_sites || b > n_sites {
        return Err(Error::arg(format!("cannot keep sites {keep:?} of {n_sites}")));
    }
    Ok(keep)
}

/// `1 x ... x op x ... x 1` with the 2x2 `op` at `site`.
pub fn embed_site_op(op: &Operator, site: usize, n_sites: usize) -> Result<Operator> {
    if op.shape() != (2, 2) {
        return Err(Error::arg("site operator must be 2x2"));
    }
    if site == 0 || site > n_sites || n_sites > MAX_SITES {
        return Err(Error::arg(format!("site {site} outside a chain of {n_sites} sites")));
    }
    let left = identity(1 << (site - 1));
    let right = identity(1 << (n_sites - site));
    Ok(kron(&kron(&left, op), &right))
}

/// Embed a 4x4 `op` acting on `(left_site, left_site + 1)`.
pub fn embed_pair_op(op: &Operator, left_site: usize, n_sites: usize) -> Result<Operator> {
    if op.shape() != (4, 4) {
        return Err(Error::arg("pair operator must be 4x4"));
    }
    if n_sites > MAX_SITES {
        return Err(Error::arg(format!("{n_sites} sites exceeds the dense limit")));
    }
    check_pair_site(left_site, n_sites)?;
    let left = identity(1 << (left_site - 1));
    let right = identity(1 << (n_sites - left_site - 1));
    Ok(kron(&kron(&left, op), &right))
}

/// Trace out every site except the ordered pair `keep`; the first kept site
/// is the more significant qubit of the result.
pub fn partial_trace_to_pair(rho: &Operator, keep: (usize, usize)) -> Result<Operator> {
    if !rho.is_square() {
        return Err(Error::contract("density matrix is not square"));
    }
    let n_sites = sites_of_dim(rho.nrows())
        .ok_or_else(|| Error::contract("density matrix dimension is not a power of two"))?;
    let tr = trace(rho);
    if (tr - ONE).norm() > 1e-8 {
        return Err(Error::contract(format!("density matrix trace is {tr}")));
    }
    let (a, b) = check_keep(keep, n_sites)?;
    let sa = site_shift(a, n_sites);
    let sb = site_shift(b, n_sites);
    let mask = (1usize << sa) | (1usize << sb);
    let compose = |base: usize, r: usize| base | (((r >> 1) & 1) << sa) | ((r & 1) << sb);
    let mut out = Operator::zeros(4, 4);
    for base in (0..rho.nrows()).filter(|i| i & mask == 0) {
        for r in 0..4 {
            for s in 0..4 {
                out[(r, s)] += rho[(compose(base, r), compose(base, s))];
            }
        }
    }
    Ok(out)
}

/// Spectrum of a Hermitian operator with ascending eigenvalues and column eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: DVector<f64>,
    pub vectors: Operator,
}

impl EigenSystem {
    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> Operator {
        let mut scaled = self.vectors.clone();
        for (j, l) in self.values.iter().enumerate() {
            let phase = C64::from_polar(1.0, -l * t);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i H t) v` without forming the propagator.
    pub fn evolve(&self, t: f64, v: &DVector<C64>) -> DVector<C64> {
        let mut coeffs = self.vectors.adjoint() * v;
        for (z, l) in coeffs.iter_mut().zip(self.values.iter()) {
            *z *= C64::from_polar(1.0, -l * t);
        }
        &self.vectors * coeffs
    }

    pub fn reconstruct(&self) -> Operator {
        let d = Operator::from_diagonal(&self.values.map(|l| c(l, 0.0)));
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn hermitian_eigen(a: &Operator) -> Result<EigenSystem> {
    if !a.is_square() {
        return Err(Error::arg("eigendecomposition of a non-square matrix"));
    }
    let scale = max_abs(a).max(1.0);
    if !is_hermitian(a, 1e-12 * scale) {
        return Err(Error::arg("matrix is not Hermitian"));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = Operator::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    Ok(EigenSystem { values, vectors })
}

/// `exp(-i H t) psi` through the eigendecomposition of `H`.
pub fn evolve_exact(h: &Operator, t: f64, psi: &StateVector) -> Result<StateVector> {
    if h.nrows() != psi.dim() {
        return Err(Error::arg(format!(
            "Hamiltonian dimension {} does not match state dimension {}",
            h.nrows(),
            psi.dim()
        )));
    }
    let eig = hermitian_eigen(h)?;
    StateVector::from_amplitudes(psi.n_sites(), eig.evolve(t, psi.amplitudes()))
}

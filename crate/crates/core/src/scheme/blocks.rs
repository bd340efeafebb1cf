use nalgebra::Matrix2;

use crate::effective::TwoQubitEffective;
use crate::error::{Error, Result};
use crate::quantum::{hermitian_eigen, EigenSystem, Operator, C64};

/// Evolution of one bond restricted to its two parity blocks.
///
/// `even` acts on `(|00>, |11>)` and `odd` on `(|01>, |10>)`, columns being
/// the images of the basis states in that order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockUnitaries {
    pub even: Matrix2<C64>,
    pub odd: Matrix2<C64>,
}

impl BlockUnitaries {
    pub fn identity() -> Self {
        Self { even: Matrix2::identity(), odd: Matrix2::identity() }
    }

    /// `<00|U|00>`, generalising gamma_1.
    pub fn stay_even(&self) -> C64 {
        self.even[(0, 0)]
    }

    /// `<11|U|00>`, generalising gamma_2.
    pub fn flip_even(&self) -> C64 {
        self.even[(1, 0)]
    }

    /// `<01|U|10>`, generalising eta_1.
    pub fn hop_odd(&self) -> C64 {
        self.odd[(0, 1)]
    }

    /// `<10|U|10>`, generalising eta_2.
    pub fn stay_odd(&self) -> C64 {
        self.odd[(1, 1)]
    }

    /// Apply to a two-bit value `v = 2 b_left + b_right`, returning the
    /// two output values with their amplitudes.
    pub fn column(&self, v: usize) -> [(usize, C64); 2] {
        match v {
            0b00 => [(0b00, self.even[(0, 0)]), (0b11, self.even[(1, 0)])],
            0b11 => [(0b00, self.even[(0, 1)]), (0b11, self.even[(1, 1)])],
            0b01 => [(0b01, self.odd[(0, 0)]), (0b10, self.odd[(1, 0)])],
            0b10 => [(0b01, self.odd[(0, 1)]), (0b10, self.odd[(1, 1)])],
            _ => unreachable!("two-bit value"),
        }
    }

    /// Full 4x4 unitary in the `|00>, |01>, |10>, |11>` basis.
    pub fn to_operator(&self) -> Operator {
        let mut u = Operator::zeros(4, 4);
        for v in 0..4 {
            for (out, amp) in self.column(v) {
                u[(out, v)] += amp;
            }
        }
        u
    }

    pub fn unitarity_defect(&self) -> f64 {
        let d = |m: &Matrix2<C64>| (m.adjoint() * m - Matrix2::identity()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        d(&self.even).max(d(&self.odd))
    }
}

fn to_matrix2(op: &Operator) -> Matrix2<C64> {
    Matrix2::new(op[(0, 0)], op[(0, 1)], op[(1, 0)], op[(1, 1)])
}

/// Cached block spectra of a two-qubit interaction, for evaluating its
/// propagator at many durations.
#[derive(Clone, Debug)]
pub struct BlockPropagator {
    even: EigenSystem,
    odd: EigenSystem,
}

/// Largest allowed matrix element between the parity blocks.
pub const PARITY_TOL: f64 = 1e-10;

impl BlockPropagator {
    pub fn new(h2: &TwoQubitEffective) -> Result<Self> {
        let leak = h2.parity_leakage();
        if leak > PARITY_TOL {
            return Err(Error::contract(format!(
                "two-qubit interaction mixes parity blocks (element {leak:e})"
            )));
        }
        Ok(Self { even: hermitian_eigen(&h2.even_block())?, odd: hermitian_eigen(&h2.odd_block())? })
    }

    pub fn at(&self, tau: f64) -> BlockUnitaries {
        BlockUnitaries { even: to_matrix2(&self.even.propagator(tau)), odd: to_matrix2(&self.odd.propagator(tau)) }
    }
}

/// `exp(-i H_even tau)` and `exp(-i H_odd tau)` for one bond.
pub fn block_unitaries(h2: &TwoQubitEffective, tau: f64) -> Result<BlockUnitaries> {
    Ok(BlockPropagator::new(h2)?.at(tau))
}

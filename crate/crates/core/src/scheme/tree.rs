use std::collections::BTreeMap;

use nalgebra::DVector;

use super::blocks::BlockUnitaries;
use crate::error::{Error, Result};
use crate::quantum::{format_bits, parse_bits, site_shift, Operator, StateVector, C64, MAX_SITES, ONE, ZERO};

/// Amplitudes below this modulus are dropped after each step.
pub const PRUNE: f64 = 1e-14;

/// Sparse pure state: computational basis strings with nonzero amplitude.
///
/// Keys are dense basis indices (site 1 is the most significant bit), so the
/// map iterates in lexicographic bit-string order.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeState {
    n_sites: usize,
    terms: BTreeMap<usize, C64>,
}

impl TreeState {
    /// `|0...0>`.
    pub fn all_zeros(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::arg(format!("{n_sites} sites outside 1..={MAX_SITES}")));
        }
        Ok(Self { n_sites, terms: BTreeMap::from([(0, ONE)]) })
    }

    pub fn from_terms<'a>(n_sites: usize, terms: impl IntoIterator<Item = (&'a str, C64)>) -> Result<Self> {
        let mut out = Self { n_sites, terms: BTreeMap::new() };
        for (bits, amp) in terms {
            if bits.len() != n_sites {
                return Err(Error::arg(format!("bit string {bits:?} is not {n_sites} long")));
            }
            *out.terms.entry(parse_bits(bits)?).or_insert(ZERO) += amp;
        }
        Ok(out)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Amplitude of a bit string such as `"01100"`; absent strings are zero.
    pub fn amplitude(&self, bits: &str) -> C64 {
        parse_bits(bits)
            .ok()
            .filter(|_| bits.len() == self.n_sites)
            .and_then(|i| self.terms.get(&i).copied())
            .unwrap_or(ZERO)
    }

    pub fn amplitude_at(&self, index: usize) -> C64 {
        self.terms.get(&index).copied().unwrap_or(ZERO)
    }

    /// `(bit string, amplitude)` pairs in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (String, C64)> + '_ {
        self.terms.iter().map(|(&i, &a)| (format_bits(i, self.n_sites), a))
    }

    pub fn indexed_terms(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.terms.iter().map(|(&i, &a)| (i, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Map every term's `(i, i+1)` substring through the bond's block unitaries.
    pub fn evolve_pair(&self, pair_left: usize, blocks: &BlockUnitaries) -> Result<TreeState> {
        if pair_left == 0 || pair_left >= self.n_sites {
            return Err(Error::arg(format!(
                "pair ({pair_left}, {}) outside a chain of {} sites",
                pair_left + 1,
                self.n_sites
            )));
        }
        let hi = site_shift(pair_left, self.n_sites);
        let lo = hi - 1;
        let mask = (1usize << hi) | (1usize << lo);
        let mut next: BTreeMap<usize, C64> = BTreeMap::new();
        for (&index, &amp) in &self.terms {
            let v = (((index >> hi) & 1) << 1) | ((index >> lo) & 1);
            let rest = index & !mask;
            for (out, coeff) in blocks.column(v) {
                let key = rest | (((out >> 1) & 1) << hi) | ((out & 1) << lo);
                *next.entry(key).or_insert(ZERO) += amp * coeff;
            }
        }
        next.retain(|_, a| a.norm() >= PRUNE);
        Ok(TreeState { n_sites: self.n_sites, terms: next })
    }

    pub fn to_state_vector(&self) -> StateVector {
        let mut v = DVector::from_element(1 << self.n_sites, ZERO);
        for (&i, &a) in &self.terms {
            v[i] = a;
        }
        StateVector::from_amplitudes(self.n_sites, v).expect("dimension matches")
    }

    /// Reduced density matrix on an ordered pair of sites, from the sparse terms.
    pub fn reduced_pair(&self, keep: (usize, usize)) -> Result<Operator> {
        let (a, b) = keep;
        if a == b || a == 0 || b == 0 || a > self.n_sites || b > self.n_sites {
            return Err(Error::arg(format!("cannot keep sites {keep:?} of {}", self.n_sites)));
        }
        let sa = site_shift(a, self.n_sites);
        let sb = site_shift(b, self.n_sites);
        let mask = (1usize << sa) | (1usize << sb);
        // Group amplitudes by the configuration of the traced sites.
        let mut groups: BTreeMap<usize, [C64; 4]> = BTreeMap::new();
        for (&i, &amp) in &self.terms {
            let local = (((i >> sa) & 1) << 1) | ((i >> sb) & 1);
            groups.entry(i & !mask).or_insert([ZERO; 4])[local] += amp;
        }
        let mut rho = Operator::zeros(4, 4);
        for local in groups.values() {
            for r in 0..4 {
                for s in 0..4 {
                    rho[(r, s)] += local[r] * local[s].conj();
                }
            }
        }
        Ok(rho)
    }
}

//! Two-qubit entanglement and state-quality measures.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{c, hermitian_eigen, is_hermitian, kron, max_abs, trace, Operator, Pauli, ONE};

/// Eigenvalues of `rho * rho_tilde` below this are treated as zero before the square root.
const CLAMP: f64 = 1e-10;
const STATE_TOL: f64 = 1e-8;

fn check_density(rho: &Operator) -> Result<()> {
    if rho.shape() != (4, 4) {
        return Err(Error::contract(format!("expected a 4x4 density matrix, got {:?}", rho.shape())));
    }
    if !is_hermitian(rho, STATE_TOL) {
        return Err(Error::contract("density matrix is not Hermitian"));
    }
    let tr = trace(rho);
    if (tr - ONE).norm() > STATE_TOL {
        return Err(Error::contract(format!("density matrix trace is {tr}")));
    }
    let min = hermitian_eigen(rho)?.values[0];
    if min < -STATE_TOL {
        return Err(Error::contract(format!("density matrix has eigenvalue {min}")));
    }
    Ok(())
}

/// `(s_y x s_y) rho^* (s_y x s_y)`.
pub fn spin_flip(rho: &Operator) -> Operator {
    let yy = kron(&Pauli::Y.matrix(), &Pauli::Y.matrix());
    &yy * rho.conjugate() * &yy
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Uses the spectrum of the non-Hermitian product `rho * rho_tilde`, whose
/// eigenvalues are the squares of the eigenvalues of
/// `sqrt(sqrt(rho) rho_tilde sqrt(rho))`.
pub fn concurrence(rho: &Operator) -> Result<f64> {
    check_density(rho)?;
    let product = rho * spin_flip(rho);
    let eig = product
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::contract("failed to triangularise rho * rho_tilde"))?;
    let mut roots: Vec<f64> = eig
        .iter()
        .map(|z| if z.re < CLAMP { 0.0 } else { z.re.sqrt() })
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `<Phi|rho|Phi>` with `|Phi> = (|00> + e^{i phi} |11>) / sqrt(2)`.
pub fn bell_fidelity(rho: &Operator, phi: f64) -> Result<f64> {
    check_density(rho)?;
    let e = c(phi.cos(), phi.sin());
    // |Phi> has amplitude 1/sqrt2 on |00> and e/sqrt2 on |11>.
    let f = rho[(0, 0)] + rho[(3, 3)] + e * rho[(0, 3)] + e.conj() * rho[(3, 0)];
    Ok(0.5 * f.re)
}

/// Default phase of the Bell target reached by the XY scheme, `(|00> + i|11>)/sqrt2`.
pub const XY_TARGET_PHASE: f64 = std::f64::consts::FRAC_PI_2;

/// `Tr(rho^2)`.
pub fn purity(rho: &Operator) -> Result<f64> {
    check_density(rho)?;
    Ok(trace(&(rho * rho)).re)
}

/// Which dynamics produced a concurrence value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Complete,
    Effective,
    Free,
}

impl Picture {
    pub fn as_str(self) -> &'static str {
        match self {
            Picture::Complete => "complete",
            Picture::Effective => "effective",
            Picture::Free => "free",
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Picture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Picture::Complete),
            "effective" => Ok(Picture::Effective),
            "free" => Ok(Picture::Free),
            other => Err(Error::arg(format!("unknown picture {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceRow {
    pub t: f64,
    pub value: f64,
    pub pair: (usize, usize),
    pub picture: Picture,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConcurrenceTrace {
    pub rows: Vec<ConcurrenceRow>,
}

impl ConcurrenceTrace {
    pub fn push(&mut self, row: ConcurrenceRow) -> Result<()> {
        if !(row.value >= 0.0 && row.value <= 1.0 + 1e-9) {
            return Err(Error::contract(format!("concurrence {} outside [0, 1]", row.value)));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rows for one site pair, in time order.
    pub fn series(&self, pair: (usize, usize)) -> impl Iterator<Item = &ConcurrenceRow> + '_ {
        self.rows.iter().filter(move |r| r.pair == pair)
    }

    pub fn last_value(&self, pair: (usize, usize)) -> Option<f64> {
        self.series(pair).last().map(|r| r.value)
    }

    /// Write `t,concurrence,pair,picture` rows with the pair formatted `i-j`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "concurrence", "pair", "picture"])?;
        for row in &self.rows {
            w.write_record([
                row.t.to_string(),
                row.value.to_string(),
                format!("{}-{}", row.pair.0, row.pair.1),
                row.picture.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest `|a - b|` entry, exposed for comparing reduced states.
pub fn density_distance(a: &Operator, b: &Operator) -> f64 {
    max_abs(&(a - b))
}

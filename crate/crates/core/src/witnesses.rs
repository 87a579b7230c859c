//! Entanglement criteria on two-qutrit states: partial transpose with the
//! negativity, and realignment with the witness quantity built from its
//! trace norm.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{trace_norm, ComplexMatrix};
use crate::states::{basis_index, split_index, DensityMatrix, DIM};

/// Values this close to zero are treated as zero when classifying.
pub const ZERO_TOL: f64 = 1e-10;

/// Which qutrit a partial transpose acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl TryFrom<u8> for Subsystem {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Subsystem::First),
            2 => Ok(Subsystem::Second),
            other => Err(Error::BadSubsystem(other)),
        }
    }
}

/// Partial transpose of a 9x9 operator on the two-qutrit space.
pub fn partial_transpose_matrix(m: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if m.rows() != DIM || m.cols() != DIM {
        return Err(Error::Shape(format!("expected {DIM}x{DIM}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(ComplexMatrix::from_fn(DIM, DIM, |row, col| {
        let (m1, m2) = split_index(row);
        let (n1, n2) = split_index(col);
        match subsystem {
            Subsystem::First => m[(basis_index(n1, m2), basis_index(m1, n2))],
            Subsystem::Second => m[(basis_index(m1, n2), basis_index(n1, m2))],
        }
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> ComplexMatrix {
    partial_transpose_matrix(rho.matrix(), subsystem).expect("density matrix is 9x9")
}

/// Realignment `R[(i,j),(k,l)] = m[(i,k),(j,l)]` of a 9x9 operator.
pub fn realign_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != DIM || m.cols() != DIM {
        return Err(Error::Shape(format!("expected {DIM}x{DIM}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(ComplexMatrix::from_fn(DIM, DIM, |row, col| {
        let (i, j) = split_index(row);
        let (k, l) = split_index(col);
        m[(basis_index(i, k), basis_index(j, l))]
    }))
}

pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    realign_matrix(rho.matrix()).expect("density matrix is 9x9")
}

fn clamp_noise(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -ZERO_TOL {
        Ok(0.0)
    } else {
        Err(Error::InvariantViolation(format!("{what} = {value:e} is negative")))
    }
}

/// `(||rho^{T_A}||_1 - 1) / 2` for the chosen subsystem.
pub fn negativity_wrt(rho: &DensityMatrix, subsystem: Subsystem) -> Result<f64> {
    let norm = trace_norm(&partial_transpose(rho, subsystem))?;
    clamp_noise(0.5 * (norm - 1.0), "negativity")
}

/// Negativity computed through the transpose of the first qutrit.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_wrt(rho, Subsystem::First)
}

/// `max(0, ||rho^R||_1 - 1)`.
pub fn realignment_witness(rho: &DensityMatrix) -> Result<f64> {
    let norm = trace_norm(&realign(rho))?;
    Ok((norm - 1.0).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntanglementClass {
    /// Negativity is positive: distillable entanglement.
    Free,
    /// PPT with a positive realignment witness.
    Bound,
    /// Neither criterion fires; compatible with separability.
    Undetected,
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntanglementClass::Free => "free",
            EntanglementClass::Bound => "bound",
            EntanglementClass::Undetected => "separable-compatible",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessPair {
    pub negativity: f64,
    pub realignment: f64,
}

impl WitnessPair {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            negativity: negativity(rho)?,
            realignment: realignment_witness(rho)?,
        })
    }

    pub fn class(&self) -> EntanglementClass {
        if self.negativity > ZERO_TOL {
            EntanglementClass::Free
        } else if self.realignment > ZERO_TOL {
            EntanglementClass::Bound
        } else {
            EntanglementClass::Undetected
        }
    }

    pub fn is_bound_entangled(&self) -> bool {
        self.class() == EntanglementClass::Bound
    }
}

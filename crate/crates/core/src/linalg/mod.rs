//! Dense complex linear algebra for the small (d <= 16) operators used throughout.

mod eigen;
mod matrix;

pub use eigen::{eig_hermitian, Spectrum, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{pauli, ComplexMatrix, C64};
pub(crate) use matrix::{I, ONE, ZERO};

use crate::error::{Error, Result};

/// Elementwise asymmetry accepted (and symmetrized away) at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Which factor of a bipartite space an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A Hermitian matrix, stored in symmetrized form `(M + M^dagger)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_finite()?;
        let asymmetry = matrix.hermitian_defect();
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::symmetrized(&matrix))
    }

    /// Symmetrizes without the asymmetry gate. Only for matrices that are
    /// Hermitian by construction up to rounding.
    pub(crate) fn symmetrized(matrix: &ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig_hermitian(self)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Kronecker product: `(M (x) N)[(i*dN + k), (j*dN + l)] = M[i,j] N[k,l]`.
pub fn tensor(m: &ComplexMatrix, n: &ComplexMatrix) -> ComplexMatrix {
    let dn = n.dim();
    ComplexMatrix::from_fn(m.dim() * dn, |r, c| {
        m[(r / dn, c / dn)] * n[(r % dn, c % dn)]
    })
}

/// Kronecker product of column vectors.
pub fn tensor_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// Reduced operator on the kept factor of a `d_A x d_B` space.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Side) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if da * db != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: m.dim(),
        });
    }
    let out = match keep {
        Side::A => ComplexMatrix::from_fn(da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    };
    Ok(out)
}

/// Schatten 2-norm `sqrt(Tr[M^dagger M])`.
pub fn schatten2(m: &ComplexMatrix) -> f64 {
    m.frobenius()
}

/// `MN - NM`
pub fn commutator(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mn = m.checked_mul(n)?;
    let nm = n.checked_mul(m)?;
    Ok(&mn - &nm)
}

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianOperator, Side, C64};

/// Eigenvalues closer than this are treated as the same outcome.
pub const LABEL_TOL: f64 = 1e-9;
/// Allowed deviation of `V^dagger V` from the identity.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A projective measurement: an orthonormal eigenbasis whose columns are
/// grouped into outcome blocks.
///
/// Each block `k` carries an outcome value `x_k` and the projector
/// `X_k = sum_{c in block k} |v_c><v_c|`. Rank-1 observables have one column
/// per block; Lüders observables such as `A (x) 1` carry wider blocks.
#[derive(Clone, Debug)]
pub struct Observable {
    basis: ComplexMatrix,
    labels: Vec<f64>,
    block_of: Vec<usize>,
    outcomes: Vec<f64>,
}

impl Observable {
    /// Nondegenerate observable `sum_i x_i |x_i><x_i|`. Repeated eigenvalues are rejected.
    pub fn from_eigenbasis(eigenvalues: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        let mut sorted = eigenvalues.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| (w[1] - w[0]).abs() <= LABEL_TOL) {
            return Err(Error::DegenerateSpectrum {
                first: w[0],
                second: w[1],
            });
        }
        Self::fine_grained(eigenvalues, basis)
    }

    /// Rank-1 measurement in the given orthonormal basis. Labels may repeat,
    /// which selects one particular eigenbasis of a degenerate operator.
    pub fn fine_grained(labels: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        check_basis(&labels, &basis)?;
        let n = labels.len();
        Ok(Self {
            basis,
            outcomes: labels.clone(),
            labels,
            block_of: (0..n).collect(),
        })
    }

    /// Lüders measurement: basis columns with equal labels share one projector.
    pub fn lueders(labels: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        check_basis(&labels, &basis)?;
        let mut outcomes: Vec<f64> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for &l in &labels {
            match outcomes.iter().position(|&o| (o - l).abs() <= LABEL_TOL) {
                Some(k) => block_of.push(k),
                None => {
                    block_of.push(outcomes.len());
                    outcomes.push(l);
                }
            }
        }
        Ok(Self {
            basis,
            labels,
            block_of,
            outcomes,
        })
    }

    /// Spectral (Lüders) measurement of a Hermitian operator.
    pub fn spectral(op: &HermitianOperator) -> Result<Self> {
        let s = op.eig()?;
        Self::lueders(s.eigenvalues, s.eigenvectors)
    }

    /// The identity observable: one outcome, projector `1`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(dim),
            labels: vec![1.0; dim],
            block_of: vec![0; dim],
            outcomes: vec![1.0],
        }
    }

    /// The product observable `self (x) other`, with projectors grouped by product eigenvalue.
    pub fn tensor(&self, other: &Observable) -> Observable {
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| a * b))
            .collect();
        let basis = linalg::tensor(&self.basis, &other.basis);
        Self::lueders(labels, basis).expect("product of orthonormal bases is orthonormal")
    }

    /// Embeds a local observable into a bipartite space: `A (x) 1` for side A,
    /// `1 (x) A` for side B.
    pub fn local(&self, side: Side, other_dim: usize) -> Observable {
        match side {
            Side::A => self.tensor(&Observable::trivial(other_dim)),
            Side::B => Observable::trivial(other_dim).tensor(self),
        }
    }

    /// Observable with the basis rotated by `U`: `U X U^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Observable> {
        let basis = u.checked_mul(&self.basis)?;
        check_basis(&self.labels, &basis)?;
        Ok(Observable {
            basis,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Distinct outcome values, one per projector.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub(crate) fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn is_rank_one(&self) -> bool {
        self.outcomes.len() == self.dim()
    }

    pub fn projector(&self, k: usize) -> HermitianOperator {
        let n = self.dim();
        let cols: Vec<Vec<C64>> = (0..n)
            .filter(|&c| self.block_of[c] == k)
            .map(|c| self.basis.column(c))
            .collect();
        let m = ComplexMatrix::from_fn(n, |i, j| cols.iter().map(|v| v[i] * v[j].conj()).sum());
        HermitianOperator::symmetrized(&m)
    }

    pub fn projectors(&self) -> Vec<HermitianOperator> {
        (0..self.num_outcomes())
            .map(|k| self.projector(k))
            .collect()
    }

    /// `sum_k x_k X_k`
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.labels).conjugate_by(&self.basis)
    }
}

fn check_basis(labels: &[f64], basis: &ComplexMatrix) -> Result<()> {
    if labels.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: labels.len(),
        });
    }
    if let Some(l) = labels.iter().find(|l| !l.is_finite()) {
        return Err(Error::InvalidObservable(format!(
            "non-finite eigenvalue {l}"
        )));
    }
    basis.check_finite()?;
    let gram = &basis.adjoint() * basis;
    let defect = (&gram - &ComplexMatrix::identity(basis.dim())).max_abs();
    if defect > UNITARITY_TOL {
        return Err(Error::InvalidObservable(format!(
            "eigenvectors are not orthonormal (max |V^dagger V - 1| = {defect:.3e})"
        )));
    }
    Ok(())
}

//! States, observables and the named preparations used by the experiments.

pub mod document;
mod observable;
mod random;

pub use observable::{Observable, LABEL_TOL, UNITARITY_TOL};
pub use random::{
    embed_config, random_density_matrix, random_observable, random_pure_state, random_qubit_config,
    random_unit_vector, random_unitary, EmbeddedConfig, RngStream, StreamRng,
};

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, pauli, ComplexMatrix, HermitianOperator, Side, Spectrum, C64, I, ONE, ZERO,
};

pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Unit-trace positive semidefinite operator, optionally split as `d_A x d_B`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: HermitianOperator,
    bipartition: Option<(usize, usize)>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, bipartition: Option<(usize, usize)>) -> Result<Self> {
        Self::from_operator(HermitianOperator::new(matrix)?, bipartition)
    }

    pub fn from_operator(
        op: HermitianOperator,
        bipartition: Option<(usize, usize)>,
    ) -> Result<Self> {
        check_bipartition(op.dim(), bipartition)?;
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = op.eig()?.eigenvalues[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { op, bipartition })
    }

    /// Wraps the output of a trace-preserving positive map applied to a valid state.
    pub(crate) fn from_map_output(m: &ComplexMatrix, bipartition: Option<(usize, usize)>) -> Self {
        Self {
            op: HermitianOperator::symmetrized(m),
            bipartition,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_map_output(
            &ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            None,
        )
    }

    /// `|psi><psi|` for a (re-normalized) state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_map_output(&ComplexMatrix::outer(&v), None))
    }

    /// `rho_A (x) rho_B`, carrying the bipartition.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        let m = linalg::tensor(a.matrix(), b.matrix());
        Self::from_map_output(&m, Some((a.dim(), b.dim())))
    }

    pub fn with_bipartition(mut self, dims: (usize, usize)) -> Result<Self> {
        check_bipartition(self.dim(), Some(dims))?;
        self.bipartition = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn bipartition(&self) -> Option<(usize, usize)> {
        self.bipartition
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        self.op.eig()
    }

    pub fn reduced(&self, keep: Side) -> Result<DensityMatrix> {
        let dims = self.bipartition.ok_or(Error::MissingBipartition)?;
        let m = linalg::partial_trace(self.matrix(), dims, keep)?;
        Ok(Self::from_map_output(&m, None))
    }

    /// `U rho U^dagger`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        self.matrix().ensure_same_dim(u)?;
        Ok(Self::from_map_output(
            &self.matrix().conjugate_by(u),
            self.bipartition,
        ))
    }

    /// Schatten-2 distance to another state.
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.matrix().ensure_same_dim(other.matrix())?;
        Ok(linalg::schatten2(&(self.matrix() - other.matrix())))
    }
}

fn check_bipartition(dim: usize, bipartition: Option<(usize, usize)>) -> Result<()> {
    match bipartition {
        Some((a, b)) if a == 0 || b == 0 || a * b != dim => Err(Error::DimensionMismatch {
            expected: dim,
            found: a * b,
        }),
        _ => Ok(()),
    }
}

/// Real 3-vector with norm at most 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        let norm = norm3(r);
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::OutOfRange {
                name: "|r|",
                value: norm,
                range: "[0, 1]",
            });
        }
        Ok(Self(r))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm3(self.0)
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `(1 + r.sigma)/2`
pub fn bloch_state(r: BlochVector) -> DensityMatrix {
    let m = &ComplexMatrix::identity(2) + &pauli::dot(r.components());
    DensityMatrix::from_map_output(&m.scale_real(0.5), None)
}

/// `n.sigma` with eigenvalues `+1, -1` and projectors `(1 +- n.sigma)/2`.
pub fn bloch_observable(n: [f64; 3]) -> Result<Observable> {
    let norm = norm3(n);
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(Error::OutOfRange {
            name: "|n|",
            value: norm,
            range: "{1}",
        });
    }
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::from_polar(1.0, phi);
    // columns: |+n>, |-n>
    let basis = ComplexMatrix::from_rows(&[
        vec![C64::new(c, 0.0), -e.conj() * s],
        vec![e * s, C64::new(c, 0.0)],
    ])?;
    Observable::from_eigenbasis(vec![1.0, -1.0], basis)
}

/// Sign of the Bell vector `(|01> +- |10>)/sqrt(2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BellSign {
    #[serde(alias = "+")]
    Plus,
    #[default]
    #[serde(alias = "-")]
    Minus,
}

impl BellSign {
    pub fn factor(self) -> f64 {
        match self {
            BellSign::Plus => 1.0,
            BellSign::Minus => -1.0,
        }
    }
}

pub fn bell_vector(sign: BellSign) -> Vec<C64> {
    let h = FRAC_1_SQRT_2;
    vec![
        ZERO,
        C64::new(h, 0.0),
        C64::new(sign.factor() * h, 0.0),
        ZERO,
    ]
}

pub fn bell_state(sign: BellSign) -> DensityMatrix {
    DensityMatrix::from_map_output(&ComplexMatrix::outer(&bell_vector(sign)), Some((2, 2)))
}

/// `(1 - alpha) 1/4 + alpha psi_sign`
pub fn werner_state(alpha: f64, sign: BellSign) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - alpha) / 4.0);
    let bell = ComplexMatrix::outer(&bell_vector(sign)).scale_real(alpha);
    Ok(DensityMatrix::from_map_output(
        &(&mixed + &bell),
        Some((2, 2)),
    ))
}

/// Computational-basis observable and its discrete-Fourier conjugate, both
/// labelled `0..d`.
pub fn mub_pair(d: usize) -> Result<(Observable, Observable)> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "mutually unbiased pair needs d >= 2",
        });
    }
    let labels: Vec<f64> = (0..d).map(|k| k as f64).collect();
    let z = Observable::from_eigenbasis(labels.clone(), ComplexMatrix::identity(d))?;
    let norm = 1.0 / (d as f64).sqrt();
    let fourier = ComplexMatrix::from_fn(d, |j, k| {
        let angle = 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
        C64::from_polar(norm, angle)
    });
    let x = Observable::from_eigenbasis(labels, fourier)?;
    Ok((z, x))
}

/// `X = sigma_z (x) 1` as a Lüders observable.
pub fn werner_x() -> Observable {
    Observable::spectral(&HermitianOperator::new(pauli::z()).unwrap())
        .unwrap()
        .local(Side::A, 2)
}

/// Matrix form of `Y = (sigma_x cos(theta) + sigma_z sin(theta)) (x) sigma_y`.
pub fn werner_y_matrix(theta: f64) -> ComplexMatrix {
    let n = pauli::dot([theta.cos(), 0.0, theta.sin()]);
    linalg::tensor(&n, &pauli::y())
}

/// `Y` measured in the rank-1 eigenbasis
/// `(sin t, +-i, cos t, 0)/sqrt2`, `(-+i cos t, 0, +-i sin t, 1)/sqrt2`
/// for eigenvalue `+-1`. This is the basis in which the closed-form Werner
/// joint irreality holds.
pub fn werner_y(theta: f64) -> Observable {
    let (s, c) = theta.sin_cos();
    let h = FRAC_1_SQRT_2;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(4);
    for sign in [1.0, -1.0] {
        cols.push(vec![C64::new(s, 0.0), I * sign, C64::new(c, 0.0), ZERO]);
        cols.push(vec![-I * (sign * c), ZERO, I * (sign * s), ONE]);
    }
    let basis = ComplexMatrix::from_fn(4, |i, j| cols[j][i] * h);
    Observable::fine_grained(vec![1.0, 1.0, -1.0, -1.0], basis)
        .expect("closed-form Werner basis is orthonormal")
}

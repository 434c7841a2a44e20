//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the real symmetric Jacobi rotation, so the
//! combined transform `R = D P` is unitary and zeroes `a_pq` exactly.

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::HermitianOperator;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius tolerance, relative to the Frobenius norm of the input.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order with the matching unitary matrix of column eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(lambda) V^dagger`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        d.conjugate_by(&self.eigenvectors)
    }
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn eig_hermitian(m: &HermitianOperator) -> Result<Spectrum> {
    let n = m.dim();
    let mut a: Vec<C64> = m.matrix().as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.matrix().frobenius().max(f64::MIN_POSITIVE);
    let tol = OFF_DIAGONAL_TOL * scale;

    let mut converged = n < 2;
    let mut residual = off_diagonal_norm(&a, n);
    for _ in 0..MAX_SWEEPS {
        if residual <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        residual = off_diagonal_norm(&a, n);
    }
    if !converged && residual > tol {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut [C64], v: &mut ComplexMatrix, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    if t == 0.0 {
        // pivot is negligible against the diagonal gap
        a[p * n + q] = ZERO;
        a[q * n + p] = ZERO;
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / mag).conj();
    // R = diag(1, phase) * [[c, s], [-s, c]]
    let r_pp = C64::new(c, 0.0);
    let r_pq = C64::new(s, 0.0);
    let r_qp = phase * (-s);
    let r_qq = phase * c;

    // A <- A R
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * r_pp + akq * r_qp;
        a[k * n + q] = akp * r_pq + akq * r_qq;
    }
    // A <- R^dagger A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = r_pp.conj() * apk + r_qp.conj() * aqk;
        a[q * n + k] = r_pq.conj() * apk + r_qq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
}

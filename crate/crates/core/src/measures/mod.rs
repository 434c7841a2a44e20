//! Entropic quantifiers, all in bits.

mod discord;
mod report;

pub use discord::{
    onesided_discord_min, OneSidedDiscord, GRID_AZIMUTHAL, GRID_POLAR, MULTISTART_SEEDS,
};
pub use report::MeasureReport;

use serde::{Deserialize, Serialize};

use crate::channels::{dephase, dephase_bilocal, dephase_seq};
use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, Side};
use crate::qstate::{DensityMatrix, Observable};

/// Eigenvalues below this contribute nothing to an entropy.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// `-sum p log2 p` over eigenvalues, ignoring those below [`EIGEN_FLOOR`].
pub fn entropy_of(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&p| p > EIGEN_FLOOR)
        .map(|&p| -p * p.log2())
        .sum();
    s.max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of(&rho.spectrum()?.eigenvalues))
}

/// `S(rho || sigma)`, or `+inf` when the support of `rho` leaks outside that of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    match relative_entropy_checked(rho, sigma) {
        Err(Error::SupportMismatch { .. }) => Ok(f64::INFINITY),
        other => other,
    }
}

/// As [`relative_entropy`], reporting a support violation as an error carrying
/// the weight of `rho` outside `supp(sigma)`.
pub fn relative_entropy_checked(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.matrix().ensure_same_dim(sigma.matrix())?;
    let s = sigma.spectrum()?;
    let rot = rho.matrix().rotate_into(&s.eigenvectors);
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (k, &q) in s.eigenvalues.iter().enumerate() {
        let p = rot[(k, k)].re;
        if q > EIGEN_FLOOR {
            cross -= p * q.log2();
        } else if p > EIGEN_FLOOR {
            leak += p;
        }
    }
    if leak > 0.0 {
        return Err(Error::SupportMismatch { leak });
    }
    Ok(cross - von_neumann_entropy(rho)?)
}

/// `log2 d - S(rho)`
pub fn information(rho: &DensityMatrix) -> Result<f64> {
    Ok((rho.dim() as f64).log2() - von_neumann_entropy(rho)?)
}

/// `S(rho_A) + S(rho_B) - S(rho)`
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let sa = von_neumann_entropy(&rho.reduced(Side::A)?)?;
    let sb = von_neumann_entropy(&rho.reduced(Side::B)?)?;
    Ok(sa + sb - von_neumann_entropy(rho)?)
}

/// `S(Phi_X(rho)) - S(rho)`
pub fn irreality(rho: &DensityMatrix, x: &Observable) -> Result<f64> {
    Ok(von_neumann_entropy(&dephase(rho, x)?)? - von_neumann_entropy(rho)?)
}

/// `[S(Phi_XY(rho)) + S(Phi_YX(rho))]/2 - S(rho)`
pub fn joint_irreality(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<f64> {
    let xy = von_neumann_entropy(&dephase_seq(rho, x, y)?)?;
    let yx = von_neumann_entropy(&dephase_seq(rho, y, x)?)?;
    Ok(0.5 * (xy + yx) - von_neumann_entropy(rho)?)
}

/// The four irrealities whose half-sum is the joint irreality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JiDecomposition {
    pub x: f64,
    pub y: f64,
    /// `I_X(Phi_Y(rho))`
    pub x_after_y: f64,
    /// `I_Y(Phi_X(rho))`
    pub y_after_x: f64,
}

impl JiDecomposition {
    /// `(I_X + I_Y + I_X(Phi_Y) + I_Y(Phi_X)) / 2`
    pub fn joint(&self) -> f64 {
        0.5 * (self.x + self.y + self.x_after_y + self.y_after_x)
    }
}

pub fn ji_decomposition(
    rho: &DensityMatrix,
    x: &Observable,
    y: &Observable,
) -> Result<JiDecomposition> {
    Ok(JiDecomposition {
        x: irreality(rho, x)?,
        y: irreality(rho, y)?,
        x_after_y: irreality(&dephase(rho, y)?, x)?,
        y_after_x: irreality(&dephase(rho, x)?, y)?,
    })
}

/// `I(rho) - I(Phi_AB(rho))` for local observables `a` on side A and `b` on side B.
pub fn symmetric_discord(rho: &DensityMatrix, a: &Observable, b: &Observable) -> Result<f64> {
    Ok(mutual_information(rho)? - mutual_information(&dephase_bilocal(rho, a, b)?)?)
}

/// `delta_XY` and the inner expression before the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub value: f64,
    pub signed: f64,
}

/// `| I(rho) + I(Phi_XY(rho_A (x) rho_B)) - I(Phi_XY(rho)) |`
pub fn delta_correlation(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<Delta> {
    let product = DensityMatrix::product(&rho.reduced(Side::A)?, &rho.reduced(Side::B)?);
    let signed = mutual_information(rho)? + mutual_information(&dephase_seq(&product, x, y)?)?
        - mutual_information(&dephase_seq(rho, x, y)?)?;
    Ok(Delta {
        value: signed.abs(),
        signed,
    })
}

/// `(delta_XY + delta_YX)/2`
pub fn script_d(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<f64> {
    Ok(0.5 * (delta_correlation(rho, x, y)?.value + delta_correlation(rho, y, x)?.value))
}

/// Largest overlap between the projectors of two observables,
/// `max_{i,j} ||X_i Y_j||_op`. For rank-1 projectors this is `max |<x_i|y_j>|`.
pub fn overlap_c(x: &Observable, y: &Observable) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    if x.is_rank_one() && y.is_rank_one() {
        let g = x.basis().adjoint().checked_mul(y.basis())?;
        return Ok(g.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let xs = x.projectors();
    let ys = y.projectors();
    let mut best: f64 = 0.0;
    for xi in &xs {
        for yj in &ys {
            // ||X Y||_op^2 is the top eigenvalue of Y X Y
            let m = &(yj.matrix() * xi.matrix()) * yj.matrix();
            let top = HermitianOperator::new(m.hermitian_part())?.eig()?;
            best = best.max(
                top.eigenvalues
                    .last()
                    .copied()
                    .unwrap_or(0.0)
                    .max(0.0)
                    .sqrt(),
            );
        }
    }
    Ok(best.min(1.0))
}

/// `I(rho) - log2(c d) <= JI <= I(rho)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JiBounds {
    pub lower: f64,
    pub upper: f64,
    pub overlap_c: f64,
}

pub fn ji_bounds(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<JiBounds> {
    let c = overlap_c(x, y)?;
    let info = information(rho)?;
    Ok(JiBounds {
        lower: info - (c * rho.dim() as f64).log2(),
        upper: info,
        overlap_c: c,
    })
}

/// Tolerance for the entropic uncertainty check.
pub const UR_TOL: f64 = 1e-9;

/// `S(Phi_X(rho)) + S(Phi_Y(rho)) + 2 log2 c`, nonnegative when the
/// uncertainty relation holds.
pub fn entropic_ur_margin(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<f64> {
    let c = overlap_c(x, y)?;
    let sx = von_neumann_entropy(&dephase(rho, x)?)?;
    let sy = von_neumann_entropy(&dephase(rho, y)?)?;
    Ok(sx + sy + 2.0 * c.log2())
}

pub fn entropic_ur_check(rho: &DensityMatrix, x: &Observable, y: &Observable) -> Result<bool> {
    Ok(entropic_ur_margin(rho, x, y)? >= -UR_TOL)
}

/// Tolerance on `|<a_i|b_j>|^2 - 1/d` for [`is_mub_pair`].
pub const MUB_TOL: f64 = 1e-10;

pub fn is_mub_pair(a: &Observable, b: &Observable) -> bool {
    if a.dim() != b.dim() || !a.is_rank_one() || !b.is_rank_one() {
        return false;
    }
    let d = a.dim() as f64;
    match a.basis().adjoint().checked_mul(b.basis()) {
        Ok(g) => g
            .as_slice()
            .iter()
            .all(|z| (z.norm_sqr() - 1.0 / d).abs() <= MUB_TOL),
        Err(_) => false,
    }
}

/// `I(rho_A) + I(rho)`: the joint irreality of a local MUB pair on side A.
pub fn mub_special_case(rho: &DensityMatrix, a: &Observable, abar: &Observable) -> Result<f64> {
    let (da, _) = rho.bipartition().ok_or(Error::MissingBipartition)?;
    if a.dim() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: a.dim(),
        });
    }
    if !is_mub_pair(a, abar) {
        return Err(Error::InvalidObservable(
            "observables are not a mutually unbiased pair".into(),
        ));
    }
    Ok(information(&rho.reduced(Side::A)?)? + mutual_information(rho)?)
}

#[cfg(test)]
mod tests;

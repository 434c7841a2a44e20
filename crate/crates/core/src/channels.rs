//! Unrevealed-measurement maps `Phi_X(rho) = sum_i X_i rho X_i` and their compositions.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Side, ZERO};
use crate::qstate::{DensityMatrix, Observable};

/// Default Schatten-2 tolerance for state equality.
pub const STATE_EQ_TOL: f64 = 1e-9;

fn check_dims(rho: &DensityMatrix, x: &Observable) -> Result<()> {
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}

/// Rotates into the eigenbasis of `x`, drops coherences between different
/// outcome blocks, and rotates back.
pub(crate) fn dephase_matrix(m: &ComplexMatrix, x: &Observable) -> ComplexMatrix {
    let v = x.basis();
    let mut inner = m.rotate_into(v);
    let block = x.block_of();
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if block[i] != block[j] {
                inner[(i, j)] = ZERO;
            }
        }
    }
    inner.conjugate_by(v)
}

pub fn dephase(rho: &DensityMatrix, x: &Observable) -> Result<DensityMatrix> {
    check_dims(rho, x)?;
    Ok(DensityMatrix::from_map_output(
        &dephase_matrix(rho.matrix(), x),
        rho.bipartition(),
    ))
}

/// `Phi_{first second}(rho) = Phi_first(Phi_second(rho))`: `second` acts first.
pub fn dephase_seq(
    rho: &DensityMatrix,
    first: &Observable,
    second: &Observable,
) -> Result<DensityMatrix> {
    check_dims(rho, first)?;
    check_dims(rho, second)?;
    let inner = dephase_matrix(rho.matrix(), second);
    Ok(DensityMatrix::from_map_output(
        &dephase_matrix(&inner, first),
        rho.bipartition(),
    ))
}

/// `sum_{i,j} (A_i (x) B_j) rho (A_i (x) B_j)`
pub fn dephase_bilocal(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<DensityMatrix> {
    let (da, db) = rho.bipartition().ok_or(Error::MissingBipartition)?;
    if a.dim() != da || b.dim() != db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: a.dim() * b.dim(),
        });
    }
    // one projector per outcome pair, so the two local maps compose
    let inner = dephase_matrix(rho.matrix(), &b.local(Side::B, da));
    Ok(DensityMatrix::from_map_output(
        &dephase_matrix(&inner, &a.local(Side::A, db)),
        rho.bipartition(),
    ))
}

pub fn is_reality_state(rho: &DensityMatrix, x: &Observable, tol: f64) -> Result<bool> {
    Ok(dephase(rho, x)?.distance(rho)? <= tol)
}

/// `Phi_XY(rho) = Phi_YX(rho) = rho` within `tol` in Schatten-2 distance.
pub fn is_joint_reality_state(
    rho: &DensityMatrix,
    x: &Observable,
    y: &Observable,
    tol: f64,
) -> Result<bool> {
    let xy = dephase_seq(rho, x, y)?.distance(rho)?;
    let yx = dephase_seq(rho, y, x)?.distance(rho)?;
    Ok(xy <= tol && yx <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, C64};
    use crate::qstate::{
        bell_state, bloch_observable, bloch_state, mub_pair, random_density_matrix,
        random_observable, BellSign, BlochVector, RngStream,
    };

    /// Projector-sum route, kept independent of the eigenbasis implementation.
    fn dephase_by_projectors(rho: &ComplexMatrix, x: &Observable) -> ComplexMatrix {
        x.projectors()
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, p| {
                &acc + &(&(p.matrix() * rho) * p.matrix())
            })
    }

    fn z_obs() -> Observable {
        bloch_observable([0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn plus_state_dephases_to_mixed() {
        let plus = bloch_state(BlochVector::new([1.0, 0.0, 0.0]).unwrap());
        let out = dephase(&plus, &z_obs()).unwrap();
        assert!((out.matrix() - &ComplexMatrix::identity(2).scale_real(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn bloch_dephasing_keeps_axis_component() {
        let r = [0.3, -0.4, 0.5];
        let rho = bloch_state(BlochVector::new(r).unwrap());
        let out = dephase(&rho, &z_obs()).unwrap();
        let want = bloch_state(BlochVector::new([0.0, 0.0, 0.5]).unwrap());
        assert!(out.distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn matches_projector_sum() {
        let mut rng = RngStream::new(3, 0).rng();
        for d in [2, 3, 4] {
            let rho = random_density_matrix(d, d, &mut rng);
            let x = random_observable(d, &mut rng);
            let fast = dephase(&rho, &x).unwrap();
            let slow = dephase_by_projectors(rho.matrix(), &x);
            assert!((fast.matrix() - &slow).max_abs() < 1e-13);
        }
        let rho = bell_state(BellSign::Minus);
        let za = z_obs().local(Side::A, 2);
        let fast = dephase(&rho, &za).unwrap();
        assert!((fast.matrix() - &dephase_by_projectors(rho.matrix(), &za)).max_abs() < 1e-15);
    }

    #[test]
    fn singlet_zz_dephasing() {
        let psi = bell_state(BellSign::Minus);
        let z = z_obs();
        let mut want = ComplexMatrix::zeros(4);
        want[(1, 1)] = C64::new(0.5, 0.0);
        want[(2, 2)] = C64::new(0.5, 0.0);
        let seq = dephase_seq(&psi, &z.local(Side::A, 2), &z.local(Side::B, 2)).unwrap();
        assert!((seq.matrix() - &want).max_abs() < 1e-15);
        let bl = dephase_bilocal(&psi, &z, &z).unwrap();
        assert!((bl.matrix() - &want).max_abs() < 1e-15);
    }

    #[test]
    fn bilocal_order_invariance() {
        let mut rng = RngStream::new(4, 0).rng();
        let rho = random_density_matrix(4, 4, &mut rng)
            .with_bipartition((2, 2))
            .unwrap();
        let a = random_observable(2, &mut rng);
        let b = random_observable(2, &mut rng);
        let ab = dephase_seq(&rho, &a.local(Side::A, 2), &b.local(Side::B, 2)).unwrap();
        let ba = dephase_seq(&rho, &b.local(Side::B, 2), &a.local(Side::A, 2)).unwrap();
        let bl = dephase_bilocal(&rho, &a, &b).unwrap();
        assert!(ab.distance(&ba).unwrap() < 1e-12);
        assert!(ab.distance(&bl).unwrap() < 1e-12);
        let unsplit = random_density_matrix(4, 4, &mut rng);
        assert!(matches!(
            dephase_bilocal(&unsplit, &a, &b),
            Err(Error::MissingBipartition)
        ));
    }

    #[test]
    fn mub_sequence_fully_depolarizes() {
        let mut rng = RngStream::new(5, 0).rng();
        for d in [2, 3, 4] {
            let (x, xbar) = mub_pair(d).unwrap();
            let rho = random_density_matrix(d, 1, &mut rng);
            let mixed = DensityMatrix::maximally_mixed(d);
            assert!(
                dephase_seq(&rho, &x, &xbar)
                    .unwrap()
                    .distance(&mixed)
                    .unwrap()
                    < 1e-12
            );
            assert!(
                dephase_seq(&rho, &xbar, &x)
                    .unwrap()
                    .distance(&mixed)
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn same_observable_sequence_is_single_map() {
        let mut rng = RngStream::new(6, 0).rng();
        let rho = random_density_matrix(3, 3, &mut rng);
        let x = random_observable(3, &mut rng);
        let once = dephase(&rho, &x).unwrap();
        let twice = dephase_seq(&rho, &x, &x).unwrap();
        assert!(once.distance(&twice).unwrap() < 1e-13);
    }

    #[test]
    fn reality_predicates() {
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(is_reality_state(&mixed, &z_obs(), STATE_EQ_TOL).unwrap());
        let plus = bloch_state(BlochVector::new([1.0, 0.0, 0.0]).unwrap());
        assert!(!is_reality_state(&plus, &z_obs(), STATE_EQ_TOL).unwrap());
        let mut rng = RngStream::new(7, 0).rng();
        let rho = random_density_matrix(3, 3, &mut rng);
        let x = random_observable(3, &mut rng);
        assert!(is_reality_state(&dephase(&rho, &x).unwrap(), &x, STATE_EQ_TOL).unwrap());

        let psi = bell_state(BellSign::Minus);
        let za = z_obs().local(Side::A, 2);
        let zb = z_obs().local(Side::B, 2);
        assert!(!is_joint_reality_state(&psi, &za, &zb, STATE_EQ_TOL).unwrap());
        let mixed4 = DensityMatrix::maximally_mixed(4);
        let y = random_observable(4, &mut rng);
        let w = random_observable(4, &mut rng);
        assert!(is_joint_reality_state(&mixed4, &y, &w, STATE_EQ_TOL).unwrap());
        // commuting pair: both diagonal in the same random basis
        let fixed = dephase_seq(
            &random_density_matrix(4, 4, &mut rng)
                .with_bipartition((2, 2))
                .unwrap(),
            &za,
            &zb,
        )
        .unwrap();
        assert!(is_joint_reality_state(&fixed, &za, &zb, STATE_EQ_TOL).unwrap());
        assert!(is_reality_state(&fixed, &za, STATE_EQ_TOL).unwrap());
        assert!(is_reality_state(&fixed, &zb, STATE_EQ_TOL).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            dephase(&rho, &z_obs()),
            Err(Error::DimensionMismatch { .. })
        ));
        let _ = pauli::x();
    }
}

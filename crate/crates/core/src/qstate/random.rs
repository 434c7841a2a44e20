use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{bloch_observable, bloch_state, norm3, BlochVector, DensityMatrix, Observable};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub type StreamRng = ChaCha8Rng;

/// Address of an independent random stream: identical `(seed, index)` pairs
/// always produce identical sample sequences, whatever thread draws them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub index: u64,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// Independent uniform `(r, lambda)` on `[0, 1)^2`.
pub fn random_qubit_config<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let r = rng.random::<f64>();
    let lambda = rng.random::<f64>();
    (r, lambda)
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = norm3(v);
        if n > 1e-8 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// A qubit state and observable realizing a given `(r, lambda)`.
#[derive(Clone, Debug)]
pub struct EmbeddedConfig {
    pub state: DensityMatrix,
    pub observable: Observable,
    pub r_hat: [f64; 3],
    pub x_hat: [f64; 3],
}

/// Random Bloch direction `r_hat`, state `r r_hat`, and observable direction
/// `x_hat` with `|x_hat . r_hat| = lambda`, in a uniformly random plane containing `r_hat`.
pub fn embed_config<R: Rng + ?Sized>(r: f64, lambda: f64, rng: &mut R) -> Result<EmbeddedConfig> {
    for (name, v) in [("r", r), ("lambda", lambda)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let r_hat = random_unit_vector(rng);
    let perp = loop {
        let u = random_unit_vector(rng);
        let d = dot3(u, r_hat);
        let w = [
            u[0] - d * r_hat[0],
            u[1] - d * r_hat[1],
            u[2] - d * r_hat[2],
        ];
        let n = norm3(w);
        if n > 1e-6 {
            break [w[0] / n, w[1] / n, w[2] / n];
        }
    };
    let s = (1.0 - lambda * lambda).max(0.0).sqrt();
    let mut x_hat = [0.0; 3];
    for k in 0..3 {
        x_hat[k] = lambda * r_hat[k] + s * perp[k];
    }
    let n = norm3(x_hat);
    x_hat.iter_mut().for_each(|c| *c /= n);
    let state = bloch_state(BlochVector::new([
        r * r_hat[0],
        r * r_hat[1],
        r * r_hat[2],
    ])?);
    let observable = bloch_observable(x_hat)?;
    Ok(EmbeddedConfig {
        state,
        observable,
        r_hat,
        x_hat,
    })
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
            for _ in 0..2 {
                for u in &cols {
                    let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    v.iter_mut().zip(u).for_each(|(x, a)| *x -= proj * a);
                }
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= n);
            cols.push(v);
        }
        if ok {
            return ComplexMatrix::from_fn(dim, |i, j| cols[j][i]);
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let psi: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    DensityMatrix::pure(&psi).expect("gaussian vector is nonzero almost surely")
}

/// `G G^dagger / Tr` with `G` a `dim x rank` Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> DensityMatrix {
    let rank = rank.clamp(1, dim);
    let g: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..rank).map(|_| gaussian_c64(rng)).collect())
        .collect();
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        g[i].iter().zip(&g[j]).map(|(a, b)| a * b.conj()).sum()
    });
    let tr = m.trace().re;
    DensityMatrix::from_map_output(&m.scale_real(1.0 / tr), None)
}

/// Nondegenerate observable with a Haar-random eigenbasis and eigenvalues `0..d`.
pub fn random_observable<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Observable {
    let labels = (0..dim).map(|k| k as f64).collect();
    Observable::from_eigenbasis(labels, random_unitary(dim, rng))
        .expect("Haar basis is orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = {
            let mut r = RngStream::new(7, 3).rng();
            (0..16).map(|_| r.random()).collect()
        };
        let b: Vec<f64> = {
            let mut r = RngStream::new(7, 3).rng();
            (0..16).map(|_| r.random()).collect()
        };
        assert_eq!(a, b);
        let mut other = RngStream::new(7, 4).rng();
        assert_ne!(a[0], other.random::<f64>());
    }

    #[test]
    fn qubit_config_statistics() {
        let mut rng = RngStream::new(11, 0).rng();
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (r, l) = random_qubit_config(&mut rng);
            assert!((0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&l));
            sum += r;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn embedding_realizes_lambda() {
        let mut rng = RngStream::new(5, 1).rng();
        for &lambda in &[0.0, 0.25, 0.7, 1.0] {
            let e = embed_config(0.8, lambda, &mut rng).unwrap();
            assert!((dot3(e.x_hat, e.r_hat).abs() - lambda).abs() < 1e-10);
            assert!((norm3(e.x_hat) - 1.0).abs() < 1e-12);
        }
        let e = embed_config(0.5, 1.0, &mut rng).unwrap();
        for k in 0..3 {
            assert!((e.x_hat[k] - e.r_hat[k]).abs() < 1e-10);
        }
        assert!(embed_config(1.5, 0.2, &mut rng).is_err());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = RngStream::new(1, 1).rng();
        for d in [2, 3, 4, 8] {
            let u = random_unitary(d, &mut rng);
            let g = &u.adjoint() * &u;
            assert!((&g - &ComplexMatrix::identity(d)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = RngStream::new(2, 9).rng();
        for d in [2, 4] {
            for rank in 1..=d {
                let rho = random_density_matrix(d, rank, &mut rng);
                let checked = DensityMatrix::new(rho.matrix().clone(), None).unwrap();
                let e = checked.spectrum().unwrap().eigenvalues;
                let nonzero = e.iter().filter(|&&x| x > 1e-10).count();
                assert_eq!(nonzero, rank);
            }
        }
    }
}

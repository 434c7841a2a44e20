use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mutual_information;
use crate::channels::dephase;
use crate::error::{Error, Result};
use crate::linalg::Side;
use crate::optimize::{nelder_mead, SimplexOptions};
use crate::qstate::{bloch_observable, DensityMatrix};

pub const GRID_POLAR: usize = 24;
pub const GRID_AZIMUTHAL: usize = 48;
pub const MULTISTART_SEEDS: usize = 5;

/// Minimized one-sided discord and the Bloch direction attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneSidedDiscord {
    pub value: f64,
    pub direction: [f64; 3],
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// `min_A [I(rho) - I(Phi_A(rho))]` over projective measurements on the qubit
/// `side`: a coarse polar/azimuthal grid picks [`MULTISTART_SEEDS`] starting
/// points, each refined by simplex descent.
pub fn onesided_discord_min(rho: &DensityMatrix, side: Side) -> Result<OneSidedDiscord> {
    let (da, db) = rho.bipartition().ok_or(Error::MissingBipartition)?;
    let (local, other) = match side {
        Side::A => (da, db),
        Side::B => (db, da),
    };
    if local != 2 {
        return Err(Error::UnsupportedDimension {
            dim: local,
            reason: "one-sided discord minimization needs a qubit on the measured side",
        });
    }
    let total = mutual_information(rho)?;
    let mut failure = None;
    let mut objective = |theta: f64, phi: f64| -> f64 {
        let n = direction(theta, phi);
        let run = || -> Result<f64> {
            let obs = bloch_observable(n)?.local(side, other);
            Ok(total - mutual_information(&dephase(rho, &obs)?)?)
        };
        match run() {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let mut grid: Vec<(f64, usize, f64, f64)> = Vec::with_capacity(GRID_POLAR * GRID_AZIMUTHAL);
    for i in 0..GRID_POLAR {
        let theta = (i as f64 + 0.5) * PI / GRID_POLAR as f64;
        for j in 0..GRID_AZIMUTHAL {
            let phi = j as f64 * 2.0 * PI / GRID_AZIMUTHAL as f64;
            let idx = i * GRID_AZIMUTHAL + j;
            grid.push((objective(theta, phi), idx, theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let opts = SimplexOptions {
        initial_step: 0.5 * PI / GRID_POLAR as f64,
        ..SimplexOptions::default()
    };
    let mut best: Option<(f64, [f64; 3])> = None;
    for &(_, _, theta, phi) in grid.iter().take(MULTISTART_SEEDS) {
        let r = nelder_mead(|p| objective(p[0], p[1]), &[theta, phi], &opts);
        // strict comparison keeps the lowest seed index on ties
        if best.is_none_or(|(v, _)| r.value < v) {
            best = Some((r.value, direction(r.x[0], r.x[1])));
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, direction) = best.expect("at least one seed");
    Ok(OneSidedDiscord {
        value: value.max(0.0),
        direction,
    })
}

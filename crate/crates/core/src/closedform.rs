//! Analytic qubit and Werner-state results, used as oracles for the matrix pipeline.
//!
//! Entropies of states whose spectrum sits near the maximally mixed one are
//! evaluated through `phi(x) = (1+x)ln(1+x) - x` and
//! `psi(x) = phi(x) + phi(-x)`, which keep full relative precision as
//! `x -> 0` where the textbook `-u log u` sums cancel catastrophically.

use std::f64::consts::{LN_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: v,
            range: "[0, 1]",
        })
    }
}

/// Bloch length `r` and alignment `lambda = |x_hat . r_hat|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitConfig {
    pub r: f64,
    pub lambda: f64,
}

impl QubitConfig {
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        check_unit("r", r)?;
        check_unit("lambda", lambda)?;
        Ok(Self { r, lambda })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerConfig {
    pub alpha: f64,
    pub theta: f64,
}

impl WernerConfig {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        check_unit("alpha", alpha)?;
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                range: "[0, pi]",
            });
        }
        Ok(Self { alpha, theta })
    }
}

/// `G(u) = -u log2 u`, with `G(0) = 0`.
pub fn g(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        -u * u.log2()
    }
}

pub fn binary_entropy(u: f64) -> Result<f64> {
    check_unit("u", u)?;
    Ok(g(u) + g(1.0 - u))
}

const SERIES_CUTOFF: f64 = 1e-2;

/// `(1+x) ln(1+x) - x` for `x >= -1`.
pub fn phi(x: f64) -> f64 {
    if x <= -1.0 {
        return 1.0;
    }
    if x.abs() < SERIES_CUTOFF {
        // sum_{k>=2} (-x)^k / (k(k-1))
        let mut term = x * x;
        let mut s = 0.0;
        for k in 2..14 {
            s += term / (k * (k - 1)) as f64;
            term *= -x;
        }
        return s;
    }
    (1.0 + x) * x.ln_1p() - x
}

/// `(1+x) ln(1+x) + (1-x) ln(1-x)` for `|x| <= 1`.
pub fn psi(x: f64) -> f64 {
    let x = x.abs();
    if x >= 1.0 {
        return 2.0 * LN_2;
    }
    if x < SERIES_CUTOFF {
        // sum_{k>=1} x^{2k} / (k(2k-1))
        let x2 = x * x;
        let mut term = x2;
        let mut s = 0.0;
        for k in 1..8 {
            s += term / (k * (2 * k - 1)) as f64;
            term *= x2;
        }
        return s;
    }
    (1.0 + x) * x.ln_1p() + (1.0 - x) * (-x).ln_1p()
}

/// `I(rho) = 1 - h((1+r)/2)` for a qubit with Bloch length `r`.
pub fn qubit_information(r: f64) -> f64 {
    psi(r) / (2.0 * LN_2)
}

/// `h((1+lambda r)/2) - h((1+r)/2)`
pub fn qubit_irreality(c: QubitConfig) -> f64 {
    ((psi(c.r) - psi(c.lambda * c.r)) / (2.0 * LN_2)).max(0.0)
}

/// `(I(1 - lambda^2), I(1 - lambda^2)^(3/4))`
pub fn qubit_irreality_bounds(c: QubitConfig) -> (f64, f64) {
    let info = qubit_information(c.r);
    let w = 1.0 - c.lambda * c.lambda;
    (info * w, info * w.powf(0.75))
}

/// Irreality below which the exponent inversion is not attempted.
pub const MU_IRREALITY_FLOOR: f64 = 1e-12;

/// `mu` with `I_X = I(rho) (1 - lambda^2)^mu`.
///
/// Returns [`Error::DegenerateConfig`] when the inversion is undefined:
/// `r = 0`, `lambda = 0` (any `mu` fits), `lambda = 1`, or vanishing irreality.
pub fn mu_exponent(c: QubitConfig) -> Result<f64> {
    if c.r <= 0.0 {
        return Err(Error::DegenerateConfig(
            "r = 0: the state carries no information",
        ));
    }
    let l2 = c.lambda * c.lambda;
    if l2 <= 0.0 {
        return Err(Error::DegenerateConfig("lambda = 0: every exponent fits"));
    }
    if c.lambda >= 1.0 {
        return Err(Error::DegenerateConfig("lambda = 1: X commutes with rho"));
    }
    if qubit_irreality(c) <= MU_IRREALITY_FLOOR {
        return Err(Error::DegenerateConfig("irreality below inversion floor"));
    }
    // ln(I_X / I) = ln(1 - psi(lambda r)/psi(r))
    let ratio = psi(c.lambda * c.r) / psi(c.r);
    Ok((-ratio).ln_1p() / (-l2).ln_1p())
}

/// `sqrt(2) r sqrt(1 - lambda^2)`, the Schatten-2 norm of `[X, rho]`.
pub fn qubit_commutator_norm(c: QubitConfig) -> f64 {
    SQRT_2 * c.r * (1.0 - c.lambda * c.lambda).max(0.0).sqrt()
}

/// `I(rho) (||[X,rho]||_2 / (r sqrt 2))^(2 mu)`
pub fn incompatibility_form(c: QubitConfig, mu: f64) -> Result<f64> {
    if c.r <= 0.0 {
        return Err(Error::DegenerateConfig(
            "r = 0: commutator normalization undefined",
        ));
    }
    let ratio = qubit_commutator_norm(c) / (c.r * SQRT_2);
    Ok(qubit_information(c.r) * ratio.powf(2.0 * mu))
}

/// Werner joint irreality in its literal `G` form,
/// `1/2 sum_e [3 G(nu_e) + G(lambda_e)] - G(1+3a)/4 - 3 G(1-a)/4 - 2`,
/// `nu_e = (2 + e a (1 + cos 2t))/8`, `lambda_e = (4 + e a (1 + 2 cos 2t + cos 4t))/16`.
pub fn werner_ji_literal(c: WernerConfig) -> f64 {
    let (a, t) = (c.alpha, c.theta);
    let mut mixed = 0.0;
    for e in [1.0, -1.0] {
        let nu = (2.0 + e * a * (1.0 + (2.0 * t).cos())) / 8.0;
        let la = (4.0 + e * a * (1.0 + 2.0 * (2.0 * t).cos() + (4.0 * t).cos())) / 16.0;
        mixed += 3.0 * g(nu) + g(la);
    }
    0.5 * mixed - 0.25 * g(1.0 + 3.0 * a) - 0.75 * g(1.0 - a) - 2.0
}

/// `phi` sums for the Werner state and for its two dephased images:
/// `(phi(3a) + 3 phi(-a), [3 psi(a cos^2 t) + psi(a cos^2 t cos 2t)] / 2)`.
fn werner_phi_sums(c: WernerConfig) -> (f64, f64) {
    let a = c.alpha;
    let c2 = c.theta.cos().powi(2);
    let state = phi(3.0 * a) + 3.0 * phi(-a);
    let dephased = 0.5 * (3.0 * psi(a * c2) + psi(a * c2 * (2.0 * c.theta).cos()));
    (state, dephased)
}

/// `I(rho_W) = log2 4 - S(rho_W)`
pub fn werner_information(alpha: f64) -> f64 {
    (phi(3.0 * alpha) + 3.0 * phi(-alpha)) / (4.0 * LN_2)
}

/// Werner joint irreality for `X = sigma_z (x) 1` and
/// `Y = (sigma_x cos t + sigma_z sin t) (x) sigma_y`, stable for small `alpha`.
pub fn werner_ji(c: WernerConfig) -> f64 {
    let (state, dephased) = werner_phi_sums(c);
    ((state - dephased) / (4.0 * LN_2)).max(0.0)
}

/// Small `alpha` used for the `alpha -> 0` limit of [`werner_ji_per_info`].
pub const PER_INFO_LIMIT_ALPHA: f64 = 1e-8;

/// `JI / I`. At `alpha = 0` the ratio is replaced by its limit, evaluated at
/// [`PER_INFO_LIMIT_ALPHA`].
pub fn werner_ji_per_info(c: WernerConfig) -> f64 {
    let c = if c.alpha > 0.0 {
        c
    } else {
        WernerConfig {
            alpha: PER_INFO_LIMIT_ALPHA,
            ..c
        }
    };
    let (state, dephased) = werner_phi_sums(c);
    1.0 - dephased / state
}

/// `alpha -> 0` limit of the per-information ratio at angle `theta`, with a
/// Richardson estimate from `alpha = 1e-6, 1e-7` as confirmation. Returns
/// `(value at 1e-8, extrapolated, |difference|)`.
pub fn werner_ji_per_info_limit(theta: f64) -> (f64, f64, f64) {
    let at = |alpha: f64| werner_ji_per_info(WernerConfig { alpha, theta });
    let v8 = at(PER_INFO_LIMIT_ALPHA);
    let (v6, v7) = (at(1e-6), at(1e-7));
    // leading error is linear in alpha
    let extrapolated = v7 + (v7 - v6) / 9.0;
    (v8, extrapolated, (v8 - extrapolated).abs())
}

/// Schatten-2 norms `||[X, rho_W]||`, `||[Y, rho_W]||`, `||[Y, Phi_X(rho_W)]||`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerCommutators {
    pub x_rho: f64,
    pub y_rho: f64,
    pub y_phi_x: f64,
}

pub fn werner_commutator_norms(c: WernerConfig) -> WernerCommutators {
    WernerCommutators {
        x_rho: SQRT_2 * c.alpha,
        y_rho: SQRT_2 * c.alpha,
        y_phi_x: c.alpha * c.theta.sin().abs(),
    }
}

/// `[2 G(1+a) - G(1-a) - G(1+3a)] / 4`, angle-independent.
pub fn werner_onesided_discord(alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    Ok((2.0 * g(1.0 + alpha) - g(1.0 - alpha) - g(1.0 + 3.0 * alpha)) / 4.0)
}

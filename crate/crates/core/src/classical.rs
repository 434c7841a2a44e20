//! Discretized phase-space distributions and unrevealed classical measurements.
//!
//! In a realistic theory, measuring `q` and then discarding the result gives
//! back the original distribution. These routines make that explicit on an
//! `n_q x n_p` grid so it can be contrasted with the quantum map.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const DEFAULT_GRID: (usize, usize) = (32, 32);

/// `w(q, p)` on a grid, stored row-major with `q` as the row index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    n_q: usize,
    n_p: usize,
    data: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Q,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    QThenP,
    PThenQ,
}

impl JointDistribution {
    pub fn new(n_q: usize, n_p: usize, data: Vec<f64>) -> Result<Self> {
        if n_q == 0 || n_p == 0 || data.len() != n_q * n_p {
            return Err(Error::InvalidDistribution(format!(
                "{} values for a {n_q} x {n_p} grid",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entry {v} is not a probability"
            )));
        }
        let total: f64 = data.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total}, expected 1"
            )));
        }
        Ok(Self { n_q, n_p, data })
    }

    pub fn uniform(n_q: usize, n_p: usize) -> Result<Self> {
        let n = n_q * n_p;
        Self::new(n_q, n_p, vec![1.0 / n as f64; n])
    }

    /// Random grid with i.i.d. exponential weights (uniform on the simplex).
    pub fn random<R: Rng + ?Sized>(n_q: usize, n_p: usize, rng: &mut R) -> Result<Self> {
        let raw: Vec<f64> = (0..n_q * n_p)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        Self::new(n_q, n_p, raw.into_iter().map(|v| v / total).collect())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_q, self.n_p)
    }

    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.data[q * self.n_p + p]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn marginal(&self, var: Variable) -> Vec<f64> {
        match var {
            Variable::Q => (0..self.n_q)
                .map(|q| (0..self.n_p).map(|p| self.get(q, p)).sum())
                .collect(),
            Variable::P => (0..self.n_p)
                .map(|p| (0..self.n_q).map(|q| self.get(q, p)).sum())
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &JointDistribution) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Conditional distribution after reading `var = outcome`: support confined
/// to that slice and renormalized.
pub fn classical_collapse_on(
    w: &JointDistribution,
    var: Variable,
    outcome: usize,
) -> Result<JointDistribution> {
    let marg = w.marginal(var);
    let m = *marg.get(outcome).ok_or_else(|| {
        Error::InvalidDistribution(format!("outcome {outcome} outside grid of {}", marg.len()))
    })?;
    if m <= 0.0 {
        return Err(Error::ZeroProbability(outcome));
    }
    let mut data = vec![0.0; w.data.len()];
    for q in 0..w.n_q {
        for p in 0..w.n_p {
            let hit = match var {
                Variable::Q => q == outcome,
                Variable::P => p == outcome,
            };
            if hit {
                data[q * w.n_p + p] = w.get(q, p) / m;
            }
        }
    }
    Ok(JointDistribution { data, ..w.clone() })
}

/// Collapse on a `q` outcome.
pub fn classical_collapse(w: &JointDistribution, outcome_q: usize) -> Result<JointDistribution> {
    classical_collapse_on(w, Variable::Q, outcome_q)
}

/// `sum_o P(o) w(. | o)`: measure `var`, forget the result.
pub fn classical_unrevealed(w: &JointDistribution, var: Variable) -> JointDistribution {
    let marg = w.marginal(var);
    let mut data = vec![0.0; w.data.len()];
    for (o, &m) in marg.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        let post = classical_collapse_on(w, var, o).expect("outcome has positive weight");
        for (acc, v) in data.iter_mut().zip(&post.data) {
            *acc += m * v;
        }
    }
    JointDistribution { data, ..w.clone() }
}

pub fn classical_sequential(w: &JointDistribution, order: Order) -> JointDistribution {
    match order {
        Order::QThenP => classical_unrevealed(&classical_unrevealed(w, Variable::Q), Variable::P),
        Order::PThenQ => classical_unrevealed(&classical_unrevealed(w, Variable::P), Variable::Q),
    }
}

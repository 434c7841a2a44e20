//! JSON documents describing states and observables.
//!
//! States:
//!
//! ```json
//! {"preset": {"werner": {"alpha": 0.5, "sign": "minus"}}}
//! {"preset": {"bell": {"sign": "plus"}}}
//! {"preset": {"bloch": {"r": [0.0, 0.0, 0.5]}}}
//! {"preset": {"maximally_mixed": {"d": 4}}}
//! {"matrix": [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]], "bipartition": [1, 2]}
//! ```
//!
//! Observables:
//!
//! ```json
//! {"pauli_direction": [0, 0, 1]}
//! {"factors": [{"pauli_direction": [0, 0, 1]}, "identity"]}
//! {"eigenvalues": [1, -1], "eigenvectors": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
//! {"hermitian": [[1, 0], [0, 0], [0, 0], [-1, 0]]}
//! {"werner_y": {"theta": 1.0}}
//! ```
//!
//! Matrices are `d^2` `[re, im]` pairs in row-major order; eigenvectors are
//! listed one vector per eigenvalue.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    bell_state, bloch_observable, bloch_state, werner_state, werner_y, BellSign, BlochVector,
    DensityMatrix, Observable,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, Side, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<StatePreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartition: Option<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StatePreset {
    Werner {
        alpha: f64,
        #[serde(default)]
        sign: BellSign,
    },
    Bell {
        #[serde(default)]
        sign: BellSign,
    },
    Bloch {
        r: [f64; 3],
    },
    MaximallyMixed {
        d: usize,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_direction: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub werner_y: Option<WernerYDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WernerYDoc {
    pub theta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorDoc {
    Keyword(String),
    Observable(Box<ObservableDoc>),
}

/// A resolved observable. `local` is set when the observable has the form
/// `A (x) 1` or `1 (x) B` on a two-factor space.
#[derive(Clone, Debug)]
pub struct ResolvedObservable {
    pub observable: Observable,
    pub local: Option<LocalPart>,
    pub factor_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct LocalPart {
    pub side: Side,
    pub observable: Observable,
    pub dims: (usize, usize),
}

impl ResolvedObservable {
    pub fn plain(observable: Observable) -> Self {
        Self {
            observable,
            local: None,
            factor_dims: None,
        }
    }

    /// `A (x) 1` (side A) or `1 (x) A` (side B), remembering the local factor.
    pub fn local(side: Side, observable: Observable, other_dim: usize) -> Self {
        let dims = match side {
            Side::A => (observable.dim(), other_dim),
            Side::B => (other_dim, observable.dim()),
        };
        Self {
            observable: observable.local(side, other_dim),
            local: Some(LocalPart {
                side,
                observable,
                dims,
            }),
            factor_dims: Some(vec![dims.0, dims.1]),
        }
    }
}

fn doc_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Document(format!("field `{field}`: {msg}"))
}

fn matrix_from_pairs(field: &str, pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let d = (pairs.len() as f64).sqrt().round() as usize;
    if d == 0 || d * d != pairs.len() {
        return Err(doc_err(
            field,
            format!("{} entries is not a perfect square", pairs.len()),
        ));
    }
    ComplexMatrix::from_vec(d, pairs.iter().map(|p| C64::new(p[0], p[1])).collect())
        .map_err(|e| doc_err(field, e))
}

impl StateDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("state document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<DensityMatrix> {
        let state = match (&self.preset, &self.matrix) {
            (Some(_), Some(_)) => {
                return Err(doc_err(
                    "preset",
                    "give either `preset` or `matrix`, not both",
                ))
            }
            (None, None) => {
                return Err(doc_err("preset", "one of `preset` or `matrix` is required"))
            }
            (Some(p), None) => match *p {
                StatePreset::Werner { alpha, sign } => {
                    werner_state(alpha, sign).map_err(|e| doc_err("preset.werner.alpha", e))?
                }
                StatePreset::Bell { sign } => bell_state(sign),
                StatePreset::Bloch { r } => {
                    bloch_state(BlochVector::new(r).map_err(|e| doc_err("preset.bloch.r", e))?)
                }
                StatePreset::MaximallyMixed { d } => {
                    if d == 0 {
                        return Err(doc_err("preset.maximally_mixed.d", "must be positive"));
                    }
                    DensityMatrix::maximally_mixed(d)
                }
            },
            (None, Some(m)) => {
                let m = matrix_from_pairs("matrix", m)?;
                DensityMatrix::new(m, None).map_err(|e| doc_err("matrix", e))?
            }
        };
        match self.bipartition {
            Some([a, b]) => state
                .with_bipartition((a, b))
                .map_err(|e| doc_err("bipartition", e)),
            None => Ok(state),
        }
    }
}

impl ObservableDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("observable document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<ResolvedObservable> {
        let given = [
            self.pauli_direction.is_some(),
            self.factors.is_some(),
            self.eigenvalues.is_some() || self.eigenvectors.is_some(),
            self.hermitian.is_some(),
            self.werner_y.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return Err(doc_err(
                "observable",
                "exactly one of `pauli_direction`, `factors`, `eigenvalues`+`eigenvectors`, `hermitian`, `werner_y` is required",
            ));
        }
        let plain = ResolvedObservable::plain;
        if let Some(n) = self.pauli_direction {
            return bloch_observable(n)
                .map(plain)
                .map_err(|e| doc_err("pauli_direction", e));
        }
        if let Some(w) = &self.werner_y {
            let mut r = plain(werner_y(w.theta));
            r.factor_dims = Some(vec![2, 2]);
            return Ok(r);
        }
        if let Some(h) = &self.hermitian {
            let m = matrix_from_pairs("hermitian", h)?;
            let op = HermitianOperator::new(m).map_err(|e| doc_err("hermitian", e))?;
            return Observable::spectral(&op)
                .map(plain)
                .map_err(|e| doc_err("hermitian", e));
        }
        if let Some(factors) = &self.factors {
            return resolve_factors(factors);
        }
        let values = self
            .eigenvalues
            .as_ref()
            .ok_or_else(|| doc_err("eigenvalues", "missing (required with `eigenvectors`)"))?;
        let vectors = self
            .eigenvectors
            .as_ref()
            .ok_or_else(|| doc_err("eigenvectors", "missing (required with `eigenvalues`)"))?;
        let d = values.len();
        if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
            return Err(doc_err(
                "eigenvectors",
                format!("expected {d} vectors of length {d}"),
            ));
        }
        let basis = ComplexMatrix::from_fn(d, |i, j| C64::new(vectors[j][i][0], vectors[j][i][1]));
        Observable::from_eigenbasis(values.clone(), basis)
            .map(plain)
            .map_err(|e| doc_err("eigenvectors", e))
    }
}

enum Factor {
    Identity(usize),
    Obs(Observable),
}

fn resolve_factors(factors: &[FactorDoc]) -> Result<ResolvedObservable> {
    if factors.is_empty() {
        return Err(doc_err("factors", "list is empty"));
    }
    let mut resolved = Vec::with_capacity(factors.len());
    for (k, f) in factors.iter().enumerate() {
        let field = format!("factors[{k}]");
        resolved.push(match f {
            FactorDoc::Keyword(word) => {
                let d = parse_identity(word).ok_or_else(|| {
                    doc_err(
                        &field,
                        format!("unknown keyword `{word}` (expected `identity` or `identity:<d>`)"),
                    )
                })?;
                Factor::Identity(d)
            }
            FactorDoc::Observable(doc) => {
                let r = doc.resolve().map_err(|e| doc_err(&field, e))?;
                Factor::Obs(r.observable)
            }
        });
    }
    let dims: Vec<usize> = resolved
        .iter()
        .map(|f| match f {
            Factor::Identity(d) => *d,
            Factor::Obs(o) => o.dim(),
        })
        .collect();
    let mut it = resolved.iter();
    let first = match it.next().unwrap() {
        Factor::Identity(d) => Observable::trivial(*d),
        Factor::Obs(o) => o.clone(),
    };
    let observable = it.fold(first, |acc, f| match f {
        Factor::Identity(d) => acc.tensor(&Observable::trivial(*d)),
        Factor::Obs(o) => acc.tensor(o),
    });
    let local = match resolved.as_slice() {
        [Factor::Obs(a), Factor::Identity(db)] => Some(LocalPart {
            side: Side::A,
            observable: a.clone(),
            dims: (a.dim(), *db),
        }),
        [Factor::Identity(da), Factor::Obs(b)] => Some(LocalPart {
            side: Side::B,
            observable: b.clone(),
            dims: (*da, b.dim()),
        }),
        _ => None,
    };
    Ok(ResolvedObservable {
        observable,
        local,
        factor_dims: Some(dims),
    })
}

fn parse_identity(word: &str) -> Option<usize> {
    match word.split_once(':') {
        None if word == "identity" => Some(2),
        Some(("identity", d)) => d.trim().parse().ok().filter(|&d| d > 0),
        _ => None,
    }
}

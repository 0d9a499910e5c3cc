//! JSON state documents.
//!
//! ```json
//! {
//!   "dims": [2, 2, 2],
//!   "amplitudes": [
//!     {"index": [1, 1, 1], "re": 0.7071067811865476, "im": 0.0},
//!     {"index": [2, 2, 2], "re": 0.7071067811865476, "im": 0.0}
//!   ],
//!   "normalized": true
//! }
//! ```
//!
//! Indices are 1-based. Unlisted amplitudes are zero. With `"normalized":
//! false` the amplitudes are rescaled to unit norm on load; otherwise they
//! must already be normalized. Numbers are written in the shortest form that
//! parses back to the same double.

use multiconc::{Complex64, Error as StateError, PureState};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<AmplitudeRecord>,
    #[serde(default = "default_normalized")]
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeRecord {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

fn default_normalized() -> bool {
    true
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("invalid state document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Field {
        field: String,
        #[source]
        source: StateError,
    },
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, StateFileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Nonzero amplitudes of `s`, in row-major order.
    pub fn from_state(s: &PureState) -> Self {
        let amplitudes = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(flat, a)| AmplitudeRecord {
                index: s.index_of(flat),
                re: a.re,
                im: a.im,
            })
            .collect();
        Self {
            dims: s.dims().to_vec(),
            amplitudes,
            normalized: true,
        }
    }

    pub fn to_state(&self) -> Result<PureState, StateFileError> {
        let field = |field: String| move |source| StateFileError::Field { field, source };
        for (i, r) in self.amplitudes.iter().enumerate() {
            if r.index.len() == self.dims.len() {
                if let Some(j) = r.index.iter().zip(&self.dims).position(|(&k, &d)| k == 0 || k > d) {
                    return Err(StateFileError::Field {
                        field: format!("amplitudes[{i}].index"),
                        source: StateError::IndexOutOfRange {
                            index: r.index.clone(),
                            subsystem: j + 1,
                            dim: self.dims[j],
                        },
                    });
                }
            } else {
                return Err(StateFileError::Field {
                    field: format!("amplitudes[{i}].index"),
                    source: StateError::IndexArity {
                        index: r.index.clone(),
                        expected: self.dims.len(),
                        found: r.index.len(),
                    },
                });
            }
        }
        let entries: Vec<(Vec<usize>, Complex64)> = self
            .amplitudes
            .iter()
            .map(|r| (r.index.clone(), Complex64::new(r.re, r.im)))
            .collect();
        let built = PureState::new(&self.dims, &entries, !self.normalized).map_err(|e| {
            let name = match e {
                StateError::EmptyDims | StateError::ZeroDim { .. } => "dims",
                StateError::NotNormalized { .. } => "normalized",
                _ => "amplitudes",
            };
            field(name.to_string())(e)
        })?;
        if self.normalized {
            Ok(built)
        } else {
            PureState::normalized_from(built.dims(), built.amplitudes().to_vec())
                .map_err(field("amplitudes".to_string()))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state documents always serialize")
    }
}

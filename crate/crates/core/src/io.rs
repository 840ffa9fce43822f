//! JSON formats shared with the command-line tool.
//!
//! A state is `{"n", "d", "amplitudes": [{"index": [..], "re", "im"}, ..]}`
//! with indices sorted lexicographically and only nonzero entries present.
//! A basis wraps an array of states with shape and construction metadata.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::OptimizationResult;
use crate::singlet::{PermutationPhase, SingletBasis};
use crate::states::{MultiIndex, PureState, SystemShape};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeJson {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub d: usize,
    pub amplitudes: Vec<AmplitudeJson>,
}

impl From<&PureState> for StateJson {
    fn from(state: &PureState) -> Self {
        Self {
            n: state.shape().n(),
            d: state.shape().d(),
            amplitudes: state
                .iter()
                .map(|(idx, a)| AmplitudeJson {
                    index: idx.labels().collect(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl StateJson {
    pub fn to_state(&self) -> Result<PureState> {
        let shape = SystemShape::new(self.n, self.d).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seen = BTreeSet::new();
        let mut entries = Vec::with_capacity(self.amplitudes.len());
        for a in &self.amplitudes {
            let idx = MultiIndex::new(&shape, a.index.iter().copied())
                .map_err(|e| Error::Parse(e.to_string()))?;
            if !seen.insert(idx.clone()) {
                return Err(Error::Parse(format!("index {:?} listed twice", a.index)));
            }
            entries.push((idx, C64::new(a.re, a.im)));
        }
        PureState::from_amplitudes(shape, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub dimension: usize,
    pub tolerance: f64,
    pub permutation_phase: Option<PermutationPhase>,
    pub states: Vec<StateJson>,
}

impl From<&SingletBasis> for BasisJson {
    fn from(basis: &SingletBasis) -> Self {
        let shape = basis.shape();
        Self {
            n: shape.n(),
            d: shape.d(),
            k: shape.k_ratio(),
            dimension: basis.len(),
            tolerance: basis.tolerance(),
            permutation_phase: basis.permutation_phase(),
            states: basis.members().iter().map(StateJson::from).collect(),
        }
    }
}

impl BasisJson {
    pub fn to_basis(&self) -> Result<SingletBasis> {
        let shape = SystemShape::new(self.n, self.d).map_err(|e| Error::Parse(e.to_string()))?;
        if self.dimension != self.states.len() {
            return Err(Error::Parse(format!(
                "dimension {} but {} states listed",
                self.dimension,
                self.states.len()
            )));
        }
        let members = self
            .states
            .iter()
            .map(|s| {
                if (s.n, s.d) != (self.n, self.d) {
                    return Err(Error::Parse(format!(
                        "state of shape (n={}, d={}) in a {shape} basis",
                        s.n, s.d
                    )));
                }
                s.to_state()
            })
            .collect::<Result<Vec<_>>>()?;
        SingletBasis::from_members(shape, members, self.tolerance, self.permutation_phase)
    }
}

/// Optimization result together with the resolved state.
#[derive(Serialize)]
pub struct OptimizationJson<'a> {
    #[serde(flatten)]
    pub result: &'a OptimizationResult,
    pub state: Option<StateJson>,
}

impl<'a> From<&'a OptimizationResult> for OptimizationJson<'a> {
    fn from(result: &'a OptimizationResult) -> Self {
        Self {
            result,
            state: result.state.as_ref().map(StateJson::from),
        }
    }
}

pub fn parse_state(text: &str) -> Result<PureState> {
    let raw: StateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_state()
}

pub fn parse_basis(text: &str) -> Result<SingletBasis> {
    let raw: BasisJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_basis()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<PureState> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn read_basis(path: impl AsRef<Path>) -> Result<SingletBasis> {
    parse_basis(&fs::read_to_string(path)?)
}

pub fn state_to_string(state: &PureState) -> String {
    to_pretty(&StateJson::from(state))
}

pub fn basis_to_string(basis: &SingletBasis) -> String {
    to_pretty(&BasisJson::from(basis))
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that parses back to the same bits.
pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    fs::write(path, to_pretty(value))?;
    Ok(())
}

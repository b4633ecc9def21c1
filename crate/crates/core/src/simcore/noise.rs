// Copyright 2026 The qnet-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Readout confusion of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct ReadoutError {
    /// P(read 1 | prepared 0).
    pub p01: f64,
    /// P(read 0 | prepared 1).
    pub p10: f64,
}

impl ReadoutError {
    pub fn new(p01: f64, p10: f64) -> Self {
        Self { p01, p10 }
    }

    /// Column-stochastic matrix `[[P(0|0), P(0|1)], [P(1|0), P(1|1)]]`.
    pub fn confusion(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.p01, self.p10], [self.p01, 1.0 - self.p10]]
    }

    pub fn is_ideal(&self) -> bool {
        self.p01 == 0.0 && self.p10 == 0.0
    }
}

impl From<[f64; 2]> for ReadoutError {
    fn from([p01, p10]: [f64; 2]) -> Self {
        Self { p01, p10 }
    }
}

impl From<ReadoutError> for [f64; 2] {
    fn from(e: ReadoutError) -> Self {
        [e.p01, e.p10]
    }
}

/// Readout errors, either shared by every qubit or listed per qubit index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Readout {
    PerQubit(Vec<ReadoutError>),
    Uniform { uniform: ReadoutError },
}

impl Readout {
    pub fn uniform(p01: f64, p10: f64) -> Self {
        Readout::Uniform { uniform: ReadoutError::new(p01, p10) }
    }

    pub fn for_qubit(&self, qubit: usize) -> Result<ReadoutError> {
        match self {
            Readout::Uniform { uniform } => Ok(*uniform),
            Readout::PerQubit(list) => list.get(qubit).copied().ok_or_else(|| {
                Error::invalid(format!(
                    "readout noise lists {} qubits, qubit {qubit} requested",
                    list.len()
                ))
            }),
        }
    }

    fn entries(&self) -> Vec<ReadoutError> {
        match self {
            Readout::Uniform { uniform } => vec![*uniform],
            Readout::PerQubit(list) => list.clone(),
        }
    }
}

/// Stochastic Pauli gate noise, realised by averaging sampled trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliNoise {
    /// Probability of a random non-identity Pauli after each one-qubit gate.
    #[serde(default)]
    pub p1: f64,
    /// Probability of a random non-identity two-qubit Pauli after each two-qubit gate.
    #[serde(default)]
    pub p2: f64,
    #[serde(default = "PauliNoise::default_trajectories")]
    pub trajectories: usize,
}

impl PauliNoise {
    fn default_trajectories() -> usize {
        1
    }

    pub fn is_active(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }
}

impl Default for PauliNoise {
    fn default() -> Self {
        Self { p1: 0.0, p2: 0.0, trajectories: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawNoiseModel")]
pub struct NoiseModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<Readout>,
    #[serde(default)]
    pub pauli: PauliNoise,
}

#[derive(Deserialize)]
struct RawNoiseModel {
    #[serde(default)]
    readout: Option<Readout>,
    #[serde(default)]
    pauli: PauliNoise,
}

impl TryFrom<RawNoiseModel> for NoiseModel {
    type Error = Error;

    fn try_from(raw: RawNoiseModel) -> Result<Self> {
        let model = NoiseModel { readout: raw.readout, pauli: raw.pauli };
        model.validate()?;
        Ok(model)
    }
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn readout_only(readout: Readout) -> Self {
        Self { readout: Some(readout), pauli: PauliNoise::default() }
    }

    /// Default hardware proxy: uniform 2.5% readout flips, 1.5% two-qubit and
    /// 0.1% one-qubit Pauli errors, 200 trajectories.
    pub fn hardware_proxy() -> Self {
        Self {
            readout: Some(Readout::uniform(0.025, 0.025)),
            pauli: PauliNoise { p1: 0.001, p2: 0.015, trajectories: 200 },
        }
    }

    pub fn trajectories(&self) -> usize {
        self.pauli.trajectories
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} = {p} is not a probability")))
            }
        };
        if let Some(readout) = &self.readout {
            for e in readout.entries() {
                in_unit("p01", e.p01)?;
                in_unit("p10", e.p10)?;
            }
        }
        in_unit("p1", self.pauli.p1)?;
        in_unit("p2", self.pauli.p2)?;
        if self.pauli.trajectories == 0 {
            return Err(Error::invalid("trajectories must be >= 1"));
        }
        Ok(())
    }

    pub fn has_readout(&self) -> bool {
        match &self.readout {
            None => false,
            Some(r) => r.entries().iter().any(|e| !e.is_ideal()),
        }
    }
}

/// Applies the tensor product of per-bit confusion matrices to a distribution
/// in place. `errors[k]` acts on outcome bit `k` (MSB-first).
pub fn apply_readout(probs: &mut [f64], errors: &[ReadoutError]) -> Result<()> {
    let num_bits = errors.len();
    if probs.len() != 1 << num_bits {
        return Err(Error::invalid(format!(
            "{} probabilities but {num_bits} readout channels",
            probs.len()
        )));
    }
    for (k, e) in errors.iter().enumerate() {
        if e.is_ideal() {
            continue;
        }
        let [[m00, m01], [m10, m11]] = e.confusion();
        let mask = 1usize << (num_bits - 1 - k);
        for i in (0..probs.len()).filter(|i| i & mask == 0) {
            let (p0, p1) = (probs[i], probs[i | mask]);
            probs[i] = m00 * p0 + m01 * p1;
            probs[i | mask] = m10 * p0 + m11 * p1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let per: NoiseModel =
            serde_json::from_str(r#"{"readout": [[0.1, 0.2], [0.0, 0.05]]}"#).unwrap();
        assert_eq!(per.readout.as_ref().unwrap().for_qubit(1).unwrap(), ReadoutError::new(0.0, 0.05));
        assert!(!per.pauli.is_active());

        let uni: NoiseModel = serde_json::from_str(
            r#"{"readout": {"uniform": [0.03, 0.03]}, "pauli": {"p1": 0.0, "p2": 0.01, "trajectories": 50}}"#,
        )
        .unwrap();
        assert_eq!(uni.readout.as_ref().unwrap().for_qubit(7).unwrap().p10, 0.03);
        assert_eq!(uni.trajectories(), 50);

        let back: NoiseModel = serde_json::from_str(&serde_json::to_string(&uni).unwrap()).unwrap();
        assert_eq!(back, uni);
    }

    #[test]
    fn rejects_invalid_probabilities() {
        assert!(serde_json::from_str::<NoiseModel>(r#"{"readout": [[1.5, 0.0]]}"#).is_err());
        assert!(serde_json::from_str::<NoiseModel>(r#"{"pauli": {"p2": 0.1, "trajectories": 0}}"#)
            .is_err());
    }

    #[test]
    fn single_bit_confusion() {
        let mut p = vec![1.0, 0.0];
        apply_readout(&mut p, &[ReadoutError::new(0.1, 0.0)]).unwrap();
        assert!((p[0] - 0.9).abs() < 1e-15 && (p[1] - 0.1).abs() < 1e-15);
    }
}

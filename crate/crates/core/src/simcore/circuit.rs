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

use super::distribution::OutcomeDistribution;
use super::gate::Gate;
use super::state::{StateVector, MAX_QUBITS};
use crate::{Error, Result};

/// Ordered gate list plus the qubits read out at the end.
///
/// The order of `measured` fixes the outcome bit order: the first listed qubit
/// is outcome bit 1 (the most significant bit of the outcome index).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
}

impl Circuit {
    /// Empty circuit measuring every qubit in index order.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::InvalidDimension { qubits: num_qubits, cap: MAX_QUBITS });
        }
        Ok(Self { num_qubits, gates: Vec::new(), measured: (0..num_qubits).collect() })
    }

    pub fn with_measured(mut self, measured: Vec<usize>) -> Result<Self> {
        self.measured = measured;
        self.validate()?;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.num_qubits)?;
        }
        if self.measured.is_empty() {
            return Err(Error::invalid("circuit measures no qubits"));
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in &self.measured {
            if q >= self.num_qubits {
                return Err(Error::QubitIndex { qubit: q, num_qubits: self.num_qubits });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::invalid(format!("qubit {q} measured twice")));
            }
        }
        Ok(())
    }

    /// Final state starting from `|0...0>`.
    pub fn simulate(&self) -> Result<StateVector> {
        self.validate()?;
        let mut state = StateVector::new(self.num_qubits)?;
        state.apply_all(&self.gates)?;
        Ok(state)
    }

    /// Noiseless distribution of the measured qubits for a given final state.
    pub fn measure(&self, state: &StateVector) -> Result<OutcomeDistribution> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::invalid("state and circuit sizes differ"));
        }
        let probs = state.probabilities();
        let n = self.num_qubits;
        let in_order = self.measured.len() == n && self.measured.iter().enumerate().all(|(i, &q)| i == q);
        if in_order {
            return Ok(OutcomeDistribution::from_raw(n, probs));
        }
        let k = self.measured.len();
        let mut out = vec![0.0; 1 << k];
        for (idx, p) in probs.into_iter().enumerate() {
            let outcome = self
                .measured
                .iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1));
            out[outcome] += p;
        }
        Ok(OutcomeDistribution::from_raw(k, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measured_order_sets_bit_order() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::X(1)).unwrap();
        let c = c.with_measured(vec![1, 0]).unwrap();
        let d = c.measure(&c.simulate().unwrap()).unwrap();
        assert_eq!(d.probs(), &[0.0, 0.0, 1.0, 0.0]); // "10": qubit 1 first
    }

    #[test]
    fn partial_measurement_marginalises() {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::X(2)).unwrap();
        let c = c.with_measured(vec![2]).unwrap();
        let d = c.measure(&c.simulate().unwrap()).unwrap();
        assert!((d.probs()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_duplicate_measurement() {
        let c = Circuit::new(2).unwrap();
        assert!(c.with_measured(vec![0, 0]).is_err());
    }
}

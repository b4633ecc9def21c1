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

//! Pure state-vector simulation.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the amplitude
//! index, so `|q0 q1 ... q(n-1)>` reads MSB-first. Outcome strings follow the
//! same rule: bit 1 of an outcome (the first measured qubit) is the most
//! significant bit of the outcome index.

mod bits;
mod circuit;
mod distribution;
mod gate;
mod kernels;
mod noise;
mod sampling;
mod state;

pub use bits::{format_outcome, parse_outcome, Bits};
pub use circuit::Circuit;
pub use distribution::{Counts, Frequencies, OutcomeDistribution};
pub use gate::{Gate, GateKind, GateMatrix};
pub use noise::{apply_readout, NoiseModel, PauliNoise, Readout, ReadoutError};
pub use sampling::{
    exact_distribution, multinomial, sample_counts, sample_pauli_trajectory, seeded_rng,
};
pub use state::{StateVector, MAX_QUBITS};

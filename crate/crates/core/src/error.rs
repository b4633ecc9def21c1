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

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid qubit count {qubits}: must be between 1 and {cap}")]
    InvalidDimension { qubits: usize, cap: usize },

    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitIndex { qubit: usize, num_qubits: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("KL divergence undefined: q is zero at outcome {outcome} where p = {p}")]
    KlSupport { outcome: String, p: f64 },

    #[error(
        "|I_{index}| = {value:e} is below {epsilon:e}; the derivative of |I|^(1/n) diverges there, \
         use the bootstrap estimate instead"
    )]
    DegenerateDerivative { index: usize, value: f64, epsilon: f64 },

    #[error("least-squares solver did not converge after {iterations} iterations (gradient-map norm {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

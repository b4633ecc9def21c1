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

//! Desk-scale simulation of quantum-network correlation experiments.
//!
//! The crate is layered bottom-up:
//!
//! * [`simcore`]: state vectors, gate kernels, exact outcome distributions,
//!   readout and stochastic Pauli noise, seeded multinomial sampling.
//! * [`protocols`]: circuit builders for the communication network, the star
//!   network, the bilocal Elegant-Joint-Measurement test and the triangle.
//! * [`analysis`]: figures of merit (winning probability, certified entangled
//!   operators, star inequality, bilocal inequality, KL diagnostics).
//! * [`stats`]: multinomial error propagation and a bootstrap cross-check.
//! * [`mitigation`]: calibration matrices, pseudo-inverse and constrained
//!   least-squares readout mitigation.
//! * [`oracles`]: brute-force verifiers used to establish ground truth.
//! * [`experiment`]: configuration, orchestration, JSON records and export.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod mitigation;
pub mod oracles;
pub mod protocols;
pub mod simcore;
pub mod stats;

pub use error::{Error, Result};

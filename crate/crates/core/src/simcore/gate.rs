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

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A gate application on concrete qubits.
///
/// `Rz(θ)` is the phase gate `diag(1, e^{iθ})`, so `S = Rz(π/2)` and
/// `T = Rz(π/4)`. `Crz` applies `Rz(θ)` to the target when the control is 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
    Crz { control: usize, target: usize, theta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rz(f64),
    Cnot,
    Crz(f64),
}

/// Dense matrix of a gate. Two-qubit matrices act on `|control target>`.
#[derive(Clone, Debug, PartialEq)]
pub enum GateMatrix {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match *self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Y(_) => GateKind::Y,
            Gate::Z(_) => GateKind::Z,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::Rz(_, theta) => GateKind::Rz(theta),
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Crz { theta, .. } => GateKind::Crz(theta),
        }
    }

    /// Qubits the gate acts on; for two-qubit gates the control comes first.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } | Gate::Crz { control, target, .. } => {
                vec![control, target]
            }
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cnot { .. } | Gate::Crz { .. } => 2,
            _ => 1,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let targets = self.targets();
        if let Some(&qubit) = targets.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::QubitIndex { qubit, num_qubits });
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::invalid(format!(
                "{self:?}: control and target must differ"
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Rz(q, theta) => Gate::Rz(q, -theta),
            Gate::Crz { control, target, theta } => Gate::Crz { control, target, theta: -theta },
            g => g,
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let phase = |theta: f64| Complex64::from_polar(1.0, theta);
        let diag = |d: Complex64| GateMatrix::One([[one, zero], [zero, d]]);
        match *self {
            Gate::H(_) => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                GateMatrix::One([[h, h], [h, -h]])
            }
            Gate::X(_) => GateMatrix::One([[zero, one], [one, zero]]),
            Gate::Y(_) => GateMatrix::One([[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]]),
            Gate::Z(_) => diag(-one),
            Gate::S(_) => diag(c(0.0, 1.0)),
            Gate::Sdg(_) => diag(c(0.0, -1.0)),
            Gate::T(_) => diag(phase(FRAC_PI_4)),
            Gate::Tdg(_) => diag(phase(-FRAC_PI_4)),
            Gate::Rz(_, theta) => diag(phase(theta)),
            Gate::Cnot { .. } => {
                let mut m = [[zero; 4]; 4];
                m[0][0] = one;
                m[1][1] = one;
                m[2][3] = one;
                m[3][2] = one;
                GateMatrix::Two(m)
            }
            Gate::Crz { theta, .. } => {
                let mut m = [[zero; 4]; 4];
                m[0][0] = one;
                m[1][1] = one;
                m[2][2] = one;
                m[3][3] = phase(theta);
                GateMatrix::Two(m)
            }
        }
    }
}

impl GateMatrix {
    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        fn defect<const D: usize>(m: &[[Complex64; D]; D]) -> f64 {
            let mut worst = 0.0f64;
            for i in 0..D {
                for j in 0..D {
                    let dot: Complex64 = (0..D).map(|k| m[k][i].conj() * m[k][j]).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expected).norm());
                }
            }
            worst
        }
        match self {
            GateMatrix::One(m) => defect(m),
            GateMatrix::Two(m) => defect(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn every_kind() -> Vec<Gate> {
        vec![
            Gate::H(0),
            Gate::X(0),
            Gate::Y(0),
            Gate::Z(0),
            Gate::S(0),
            Gate::Sdg(0),
            Gate::T(0),
            Gate::Tdg(0),
            Gate::Rz(0, 0.37),
            Gate::Cnot { control: 0, target: 1 },
            Gate::Crz { control: 0, target: 1, theta: -1.3 },
        ]
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in every_kind() {
            assert!(g.matrix().unitarity_defect() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn arity_and_validation() {
        assert!(Gate::H(2).validate(2).is_err());
        assert!(Gate::Cnot { control: 1, target: 1 }.validate(2).is_err());
        assert!(Gate::Cnot { control: 0, target: 1 }.validate(2).is_ok());
        for g in every_kind() {
            assert_eq!(g.targets().len(), g.arity());
        }
    }

    #[test]
    fn s_is_quarter_turn_phase() {
        let GateMatrix::One(s) = Gate::S(0).matrix() else { unreachable!() };
        let GateMatrix::One(rz) = Gate::Rz(0, std::f64::consts::FRAC_PI_2).matrix() else {
            unreachable!()
        };
        for i in 0..2 {
            for j in 0..2 {
                assert!((s[i][j] - rz[i][j]).norm() < 1e-15);
            }
        }
    }
}

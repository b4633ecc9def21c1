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

//! Circuit builders for the four network experiments.
//!
//! Every builder measures all of its qubits in index order, so outcome bit
//! `k` is qubit `k`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::simcore::{Bits, Circuit, Gate};
use crate::{Error, Result};

/// Inputs of the communication network: two bits `(x_k, y_k)` per node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CommNetSettings {
    pub x: Bits,
    pub y: Bits,
}

impl CommNetSettings {
    pub fn new(x: Bits, y: Bits) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::invalid(format!(
                "x has {} bits but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::invalid("the communication network needs n >= 2 nodes"));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn count(n: usize) -> u64 {
        1u64 << (2 * n)
    }

    /// Settings enumerated as `index = x << n | y`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        let mask = (1u64 << n) - 1;
        Self::new(Bits::new(n, index >> n)?, Bits::new(n, index & mask)?)
    }

    pub fn index(&self) -> u64 {
        (self.x.value() << self.n()) | self.y.value()
    }

    /// The unique outcome `b` satisfying `b_1 = ⊕ x_k` and `b_k = y_k ⊕ y_1`,
    /// as an MSB-first outcome index.
    pub fn winning_outcome(&self) -> usize {
        let n = self.n();
        let b1 = usize::from(self.x.parity());
        let y1 = self.y.get(0);
        (1..n).fold(b1, |acc, k| (acc << 1) | usize::from(self.y.get(k) ^ y1))
    }
}

/// One binary measurement choice per branch of the star network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StarSettings {
    pub x: Bits,
}

impl StarSettings {
    pub fn new(x: Bits) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::invalid("the star network needs n >= 2 branches"));
        }
        Ok(Self { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn count(n: usize) -> u64 {
        1u64 << n
    }

    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        Self::new(Bits::new(n, index)?)
    }

    pub fn index(&self) -> u64 {
        self.x.value()
    }
}

/// Pauli basis of a branch party in the bilocal test: 1 = σ_X, 2 = σ_Y, 3 = σ_Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBilocalSettings")]
pub struct BilocalSettings {
    pub x: u8,
    pub z: u8,
}

#[derive(Deserialize)]
struct RawBilocalSettings {
    x: u8,
    z: u8,
}

impl TryFrom<RawBilocalSettings> for BilocalSettings {
    type Error = Error;

    fn try_from(raw: RawBilocalSettings) -> Result<Self> {
        Self::new(raw.x, raw.z)
    }
}

impl BilocalSettings {
    pub fn new(x: u8, z: u8) -> Result<Self> {
        if !(1..=3).contains(&x) || !(1..=3).contains(&z) {
            return Err(Error::invalid(format!("bilocal bases must be in 1..=3, got ({x}, {z})")));
        }
        Ok(Self { x, z })
    }

    pub fn all() -> impl Iterator<Item = BilocalSettings> {
        (1..=3u8).flat_map(|x| (1..=3u8).map(move |z| BilocalSettings { x, z }))
    }

    pub fn index(&self) -> usize {
        usize::from(3 * (self.x - 1) + (self.z - 1))
    }
}

/// `H` on the first qubit, then a CNOT from it to each of the others.
pub fn ghz_preparation(qubits: &[usize]) -> Vec<Gate> {
    let Some((&head, rest)) = qubits.split_first() else { return Vec::new() };
    std::iter::once(Gate::H(head))
        .chain(rest.iter().map(|&t| Gate::Cnot { control: head, target: t }))
        .collect()
}

/// Inverse of GHZ preparation: maps `|M_b>` to the computational state `|b>`.
pub fn bsm_decoder(qubits: &[usize]) -> Vec<Gate> {
    let mut gates = ghz_preparation(qubits);
    gates.reverse();
    gates
}

/// `(|01> - |10>)/√2` on `(first, second)`: X, H on `first`, CNOT, X on `second`.
pub fn singlet_preparation(first: usize, second: usize) -> [Gate; 4] {
    [
        Gate::X(first),
        Gate::H(first),
        Gate::Cnot { control: first, target: second },
        Gate::X(second),
    ]
}

/// Rotates the Elegant Joint Measurement basis onto the computational basis.
///
/// This is the inverse of `U = CNOT·(H⊗1)·CRz(π/2)·(S⊗S)·(H⊗H)` on
/// `(first, second)`, so reading `(k1, k2)` afterwards means EJM outcome
/// `k = 2·k1 + k2` (labelled `k + 1`).
pub fn ejm_measurement(first: usize, second: usize) -> Result<Vec<Gate>> {
    if first == second {
        return Err(Error::invalid("EJM needs two distinct qubits"));
    }
    Ok(vec![
        Gate::Cnot { control: first, target: second },
        Gate::H(first),
        Gate::Crz { control: first, target: second, theta: -FRAC_PI_2 },
        Gate::Sdg(first),
        Gate::Sdg(second),
        Gate::H(first),
        Gate::H(second),
    ])
}

/// `|GHZ>`, local `Z^{x_k} X^{y_k}` on qubit `k`, then the BSM decoder.
pub fn build_commnet_circuit(s: &CommNetSettings) -> Result<Circuit> {
    let n = s.n();
    if n < 2 {
        return Err(Error::invalid("the communication network needs n >= 2 nodes"));
    }
    let qubits: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n)?;
    c.extend(ghz_preparation(&qubits))?;
    for k in 0..n {
        if s.x.get(k) {
            c.push(Gate::Z(k))?;
        }
        if s.y.get(k) {
            c.push(Gate::X(k))?;
        }
    }
    c.extend(bsm_decoder(&qubits))?;
    Ok(c)
}

/// Star network on `2n` qubits: branch `i` is qubit `i`, its central partner
/// is qubit `n + i`. Outcomes read `(a_1..a_n, b_1..b_n)`.
///
/// Branch `i` applies T (x_i = 0) or T† (x_i = 1) and then H before readout,
/// i.e. it measures one of the two diagonal observables in the X–Y plane.
pub fn build_star_circuit(s: &StarSettings) -> Result<Circuit> {
    let n = s.n();
    if n < 2 {
        return Err(Error::invalid("the star network needs n >= 2 branches"));
    }
    let mut c = Circuit::new(2 * n)?;
    for i in 0..n {
        c.extend(ghz_preparation(&[i, n + i]))?;
    }
    for i in 0..n {
        c.push(if s.x.get(i) { Gate::Tdg(i) } else { Gate::T(i) })?;
        c.push(Gate::H(i))?;
    }
    let central: Vec<usize> = (n..2 * n).collect();
    c.extend(bsm_decoder(&central))?;
    Ok(c)
}

/// Bilocal layout: qubit 0 = A, 1 = B's half of source AB, 2 = B's half of
/// source BC, 3 = C.
pub mod bilocal_layout {
    pub const A: usize = 0;
    pub const B_FROM_A: usize = 1;
    pub const B_FROM_C: usize = 2;
    pub const C: usize = 3;
}

fn basis_rotation(qubit: usize, basis: u8) -> Vec<Gate> {
    match basis {
        1 => vec![Gate::H(qubit)],
        2 => vec![Gate::Sdg(qubit), Gate::H(qubit)],
        _ => Vec::new(),
    }
}

/// Two singlets, Pauli-basis readout on the branches and the EJM in the
/// middle. The EJM acts on `(B_FROM_C, B_FROM_A)`; outcome bits are
/// `(a, k1, k2, c)`, decoded by [`decode_bilocal_outcome`].
pub fn build_bilocal_circuit(s: &BilocalSettings) -> Result<Circuit> {
    use bilocal_layout::*;
    let s = BilocalSettings::new(s.x, s.z)?;
    let mut c = Circuit::new(4)?;
    c.extend(singlet_preparation(A, B_FROM_A))?;
    c.extend(singlet_preparation(B_FROM_C, C))?;
    c.extend(basis_rotation(A, s.x))?;
    c.extend(basis_rotation(C, s.z))?;
    c.extend(ejm_measurement(B_FROM_C, B_FROM_A)?)?;
    c.with_measured(vec![A, B_FROM_C, B_FROM_A, C])
}

/// Outcome of one bilocal shot: `a, c ∈ {+1, -1}`, `b ∈ {1, 2, 3, 4}` labelled
/// so that outcome `b` is aligned with tetrahedron vertex `m_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BilocalOutcome {
    pub a: i8,
    pub b: u8,
    pub c: i8,
}

/// Tetrahedron vertex label of EJM index `k = 2·k1 + k2` in the bilocal layout.
pub const BILOCAL_VERTEX_OF_EJM: [u8; 4] = [4, 1, 3, 2];

pub fn decode_bilocal_outcome(outcome: usize) -> BilocalOutcome {
    let sign = |bit: usize| if bit == 0 { 1 } else { -1 };
    let k = (outcome >> 1) & 0b11;
    BilocalOutcome {
        a: sign((outcome >> 3) & 1),
        b: BILOCAL_VERTEX_OF_EJM[k],
        c: sign(outcome & 1),
    }
}

/// Six qubits on a ring. Sources emit singlets on (1,2), (3,4), (5,0); nodes
/// A = (0,1), B = (2,3), C = (4,5) each perform the EJM. Outcome index is
/// `16·(a-1) + 4·(b-1) + (c-1)`.
pub fn build_triangle_circuit() -> Result<Circuit> {
    let mut c = Circuit::new(6)?;
    for (p, q) in [(1, 2), (3, 4), (5, 0)] {
        c.extend(singlet_preparation(p, q))?;
    }
    for (p, q) in [(0, 1), (2, 3), (4, 5)] {
        c.extend(ejm_measurement(p, q)?)?;
    }
    Ok(c)
}

/// `(a, b, c)` labels in `1..=4` of a triangle outcome index.
pub fn decode_triangle_outcome(outcome: usize) -> (u8, u8, u8) {
    (
        ((outcome >> 4) & 3) as u8 + 1,
        ((outcome >> 2) & 3) as u8 + 1,
        (outcome & 3) as u8 + 1,
    )
}

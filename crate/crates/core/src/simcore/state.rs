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

use num_complex::Complex64;

use super::gate::{Gate, GateMatrix};
use super::kernels;
use crate::{Error, Result};

/// Largest register the simulator allocates (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Pure state of `num_qubits` qubits as `2^num_qubits` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_dimension(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Wraps explicit amplitudes. The length must be a power of two; the
    /// vector is taken as given (no renormalization).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_dimension(num_qubits)?;
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let n = self.num_qubits;
        let mask = |q: usize| 1usize << (n - 1 - q);
        let amps = self.amplitudes.as_mut_slice();
        match *gate {
            Gate::H(q) => kernels::hadamard(amps, mask(q)),
            Gate::X(q) => kernels::pauli_x(amps, mask(q)),
            Gate::Y(q) => kernels::pauli_y(amps, mask(q)),
            Gate::Z(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) | Gate::Rz(q, _) => {
                let GateMatrix::One(m) = gate.matrix() else { unreachable!() };
                kernels::phase_where_set(amps, mask(q), m[1][1]);
            }
            Gate::Cnot { control, target } => {
                kernels::controlled_x(amps, mask(control), mask(target));
            }
            Gate::Crz { control, target, theta } => {
                let phase = Complex64::from_polar(1.0, theta);
                kernels::phase_where_set(amps, mask(control) | mask(target), phase);
            }
        }
        Ok(())
    }

    /// Applies any single-qubit unitary through the generic pair kernel.
    pub fn apply_unitary(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex { qubit, num_qubits: self.num_qubits });
        }
        let mask = self.mask(qubit);
        kernels::apply_matrix(&mut self.amplitudes, mask, m);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.apply(g))
    }
}

fn check_dimension(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::InvalidDimension { qubits: num_qubits, cap: MAX_QUBITS });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn ground_state() {
        let s = StateVector::new(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let s = StateVector::new(2).unwrap();
        assert!(close(s.amplitudes()[0], 1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(StateVector::new(0), Err(Error::InvalidDimension { .. })));
        assert!(matches!(
            StateVector::new(MAX_QUBITS + 1),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::new(1).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let mut s = StateVector::new(2).unwrap();
        s.apply(&Gate::X(0)).unwrap(); // |10>
        s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!(close(s.amplitudes()[0b11], 1.0, 0.0));
    }

    #[test]
    fn bell_pair() {
        let mut s = StateVector::new(2).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!(close(s.amplitudes()[0b00], FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitudes()[0b11], FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitudes()[0b01], 0.0, 0.0));
        assert!(close(s.amplitudes()[0b10], 0.0, 0.0));
    }

    #[test]
    fn out_of_range_target() {
        let mut s = StateVector::new(2).unwrap();
        assert!(matches!(s.apply(&Gate::X(2)), Err(Error::QubitIndex { qubit: 2, .. })));
    }

    #[test]
    fn specialised_kernels_match_dense_matrices() {
        // Every gate through its fast kernel vs. the generic 2x2 / 4x4 product.
        let gates = [
            Gate::H(1),
            Gate::X(2),
            Gate::Y(0),
            Gate::Z(1),
            Gate::S(2),
            Gate::Sdg(0),
            Gate::T(1),
            Gate::Tdg(2),
            Gate::Rz(0, 0.77),
            Gate::Cnot { control: 2, target: 0 },
            Gate::Crz { control: 0, target: 2, theta: 1.1 },
        ];
        let amps: Vec<Complex64> = (0..8)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
        for g in gates {
            let mut fast = StateVector::from_amplitudes(amps.clone()).unwrap();
            fast.apply(&g).unwrap();
            let dense = dense_apply(&amps, 3, &g);
            for (a, b) in fast.amplitudes().iter().zip(&dense) {
                assert!((a - b).norm() < 1e-14, "{g:?}");
            }
        }
    }

    fn dense_apply(amps: &[Complex64], n: usize, g: &Gate) -> Vec<Complex64> {
        let targets = g.targets();
        let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (row, slot) in out.iter_mut().enumerate() {
            for (col, amp) in amps.iter().enumerate() {
                // Non-target bits must agree.
                let others = (0..n).filter(|q| !targets.contains(q));
                if others.clone().any(|q| bit(row, q) != bit(col, q)) {
                    continue;
                }
                let entry = match g.matrix() {
                    GateMatrix::One(m) => m[bit(row, targets[0])][bit(col, targets[0])],
                    GateMatrix::Two(m) => {
                        let r = 2 * bit(row, targets[0]) + bit(row, targets[1]);
                        let c = 2 * bit(col, targets[0]) + bit(col, targets[1]);
                        m[r][c]
                    }
                };
                *slot += entry * amp;
            }
        }
        out
    }

    #[test]
    fn parallel_kernels_match_sequential() {
        // 15 qubits crosses the parallel threshold; check the block-parallel and the
        // inner-parallel (top qubit) paths against an explicit pair loop.
        let n = 15;
        let mut s = StateVector::new(n).unwrap();
        for q in 0..n {
            s.apply(&Gate::H(q)).unwrap();
            s.apply(&Gate::Rz(q, 0.1 * q as f64)).unwrap();
        }
        let before = s.amplitudes().to_vec();
        for q in [0, n - 1] {
            let mut a = s.clone();
            a.apply(&Gate::Y(q)).unwrap();
            let mask = 1 << (n - 1 - q);
            for i in 0..before.len() {
                let expected = if i & mask == 0 {
                    -Complex64::i() * before[i | mask]
                } else {
                    Complex64::i() * before[i & !mask]
                };
                assert_eq!(a.amplitudes()[i], expected);
            }
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

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


//! Simulator invariants checked against independent constructions.

use num_complex::Complex64;
use proptest::prelude::*;
use qnet_core::simcore::{
    exact_distribution, sample_counts, Circuit, Frequencies, Gate, NoiseModel, OutcomeDistribution, PauliNoise,
    Readout, ReadoutError, StateVector,
};

fn gate_strategy(n: usize) -> BoxedStrategy<Gate> {
    let one = (0..n, 0..9usize, -4.0f64..4.0).prop_map(|(q, k, theta)| match k {
        0 => Gate::H(q),
        1 => Gate::X(q),
        2 => Gate::Y(q),
        3 => Gate::Z(q),
        4 => Gate::S(q),
        5 => Gate::Sdg(q),
        6 => Gate::T(q),
        7 => Gate::Tdg(q),
        _ => Gate::Rz(q, theta),
    });
    if n < 2 {
        return one.boxed();
    }
    let two = (0..n, 1..n, any::<bool>(), -4.0f64..4.0).prop_map(move |(c, off, crz, theta)| {
        let t = (c + off) % n;
        if crz {
            Gate::Crz { control: c, target: t, theta }
        } else {
            Gate::Cnot { control: c, target: t }
        }
    });
    prop_oneof![3 => one, 1 => two].boxed()
}

fn circuit_strategy() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (1..=10usize).prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 0..=100)))
}

/// Dense confusion oracle: `noisy[j] = Σ_i Π_k C_k[j_k][i_k] p[i]`.
fn dense_readout(p: &[f64], errors: &[ReadoutError]) -> Vec<f64> {
    let n = errors.len();
    let bit = |x: usize, k: usize| (x >> (n - 1 - k)) & 1;
    (0..p.len())
        .map(|j| {
            (0..p.len())
                .map(|i| errors.iter().enumerate().map(|(k, e)| e.confusion()[bit(j, k)][bit(i, k)]).product::<f64>() * p[i])
                .sum()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn norm_is_preserved((n, gates) in circuit_strategy()) {
        let mut state = StateVector::new(n).unwrap();
        state.apply_all(&gates).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn readout_noise_is_the_confusion_tensor_product(
        (n, gates) in (1..=6usize).prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 0..40))),
        rates in prop::collection::vec((0.0f64..0.3, 0.0f64..0.3), 6),
    ) {
        let mut circuit = Circuit::new(n).unwrap();
        circuit.extend(gates).unwrap();
        let errors: Vec<ReadoutError> = rates[..n].iter().map(|&(a, b)| ReadoutError::new(a, b)).collect();
        let ideal = exact_distribution(&circuit, None, None).unwrap();
        let noisy = exact_distribution(&circuit, Some(&NoiseModel::readout_only(Readout::PerQubit(errors.clone()))), None).unwrap();
        for (a, b) in noisy.probs().iter().zip(dense_readout(ideal.probs(), &errors)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic(weights in prop::collection::vec(0.0f64..1.0, 8), shots in 1u64..100_000, seed: u64) {
        let total: f64 = weights.iter().map(|w| w + 0.01).sum();
        let probs: Vec<f64> = weights.iter().map(|w| (w + 0.01) / total).collect();
        let dist = OutcomeDistribution::new(probs).unwrap();
        let a = sample_counts(&dist, shots, seed).unwrap();
        let b = sample_counts(&dist, shots, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.shots(), shots);
    }
}

#[test]
fn distribution_sums_to_one_after_noise() {
    let mut c = Circuit::new(4).unwrap();
    c.extend([Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::T(1), Gate::H(2), Gate::Crz { control: 2, target: 3, theta: 0.7 }])
        .unwrap();
    let d = exact_distribution(&c, Some(&NoiseModel::hardware_proxy()), Some(9)).unwrap();
    assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-10);
    assert!(d.probs().iter().all(|&p| p >= 0.0));
}

/// Average over the 15 non-identity two-qubit Paulis after a CNOT on `|00>`,
/// built by hand rather than through the trajectory sampler.
fn enumerated_two_qubit_depolarised_marginal() -> f64 {
    type Pauli = fn(usize) -> Gate;
    let paulis: [Option<Pauli>; 4] = [None, Some(Gate::X), Some(Gate::Y), Some(Gate::Z)];
    let mut total = 0.0;
    for code in 1..16 {
        let mut state = StateVector::new(2).unwrap();
        state.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        for (q, p) in [(0, paulis[code / 4]), (1, paulis[code % 4])] {
            if let Some(p) = p {
                state.apply(&p(q)).unwrap();
            }
        }
        let probs = state.probabilities();
        total += probs[0b10] + probs[0b11];
    }
    total / 15.0
}

#[test]
fn two_qubit_pauli_average_matches_enumeration() {
    let oracle = enumerated_two_qubit_depolarised_marginal();
    // Eight of the fifteen Paulis carry X or Y on the first qubit.
    assert!((oracle - 8.0 / 15.0).abs() < 1e-12);

    let mut c = Circuit::new(2).unwrap();
    c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
    let trajectories = 40_000;
    let noise = NoiseModel { readout: None, pauli: PauliNoise { p1: 0.0, p2: 1.0, trajectories } };
    let d = exact_distribution(&c, Some(&noise), Some(123)).unwrap();
    let sigma = (oracle * (1.0 - oracle) / trajectories as f64).sqrt();
    for q in 0..2 {
        let mask = 1 << (1 - q);
        let marginal: f64 = (0..4).filter(|o| o & mask != 0).map(|o| d.probability(o)).sum();
        assert!((marginal - oracle).abs() < 5.0 * sigma, "qubit {q}: {marginal} vs {oracle}");
    }
}

#[test]
fn apply_all_matches_dense_product_on_random_state() {
    let amps: Vec<Complex64> = (0..8).map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.91).cos())).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut state = StateVector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
    let gates = [Gate::H(1), Gate::Crz { control: 2, target: 0, theta: 1.1 }, Gate::Sdg(2), Gate::Cnot { control: 1, target: 2 }];
    state.apply_all(&gates).unwrap();
    let mut back = state.clone();
    let inverse: Vec<Gate> = gates.iter().rev().map(Gate::inverse).collect();
    back.apply_all(&inverse).unwrap();
    for (a, b) in back.amplitudes().iter().zip(&amps) {
        assert!((a - b / norm).norm() < 1e-12);
    }
}

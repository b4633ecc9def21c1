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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::circuit::Circuit;
use super::distribution::{Counts, Frequencies, OutcomeDistribution};
use super::gate::Gate;
use super::noise::{apply_readout, NoiseModel};
use crate::{Error, Result};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws `shots` multinomial samples from `probs` by conditional binomials.
/// Negative weights are treated as zero; the weights need not be normalised.
pub fn multinomial<R: Rng + ?Sized>(
    probs: &(impl Frequencies + ?Sized),
    shots: u64,
    rng: &mut R,
) -> Counts {
    let support: Vec<(usize, f64)> = probs.nonzero().filter(|&(_, p)| p > 0.0).collect();
    let mut counts = Counts::new(probs.num_bits());
    let mut remaining_shots = shots;
    let mut remaining_mass: f64 = support.iter().map(|&(_, p)| p).sum();
    for (pos, &(outcome, p)) in support.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        let last = pos + 1 == support.len();
        let q = if remaining_mass > 0.0 { p / remaining_mass } else { 1.0 };
        let drawn = if last || q >= 1.0 {
            remaining_shots
        } else {
            Binomial::new(remaining_shots, q.max(0.0))
                .expect("binomial parameter within [0, 1]")
                .sample(rng)
        };
        counts.add(outcome, drawn);
        remaining_shots -= drawn;
        remaining_mass -= p;
    }
    counts
}

/// Seeded multinomial sample of `shots` outcomes.
pub fn sample_counts(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::invalid("shots must be >= 1"));
    }
    Ok(multinomial(dist, shots, &mut seeded_rng(seed)))
}

const ONE_QUBIT_PAULIS: [fn(usize) -> Gate; 3] = [Gate::X, Gate::Y, Gate::Z];

fn pauli_gate(code: usize, qubit: usize) -> Option<Gate> {
    match code {
        0 => None,
        c => Some(ONE_QUBIT_PAULIS[c - 1](qubit)),
    }
}

/// One stochastic realisation of the circuit: after every one-qubit gate a
/// uniformly random X/Y/Z is inserted with probability `p1`; after every
/// two-qubit gate one of the 15 non-identity two-qubit Paulis with
/// probability `p2` (identity factors are omitted from the gate list).
pub fn sample_pauli_trajectory(circuit: &Circuit, noise: &NoiseModel, seed: u64) -> Result<Circuit> {
    noise.validate()?;
    let mut rng = seeded_rng(seed);
    let mut out = Circuit::new(circuit.num_qubits())?.with_measured(circuit.measured().to_vec())?;
    let (p1, p2) = (noise.pauli.p1, noise.pauli.p2);
    for gate in circuit.gates() {
        out.push(*gate)?;
        let targets = gate.targets();
        match *targets.as_slice() {
            [q] if p1 > 0.0 && rng.random::<f64>() < p1 => {
                out.push(ONE_QUBIT_PAULIS[rng.random_range(0..3)](q))?;
            }
            [a, b] if p2 > 0.0 && rng.random::<f64>() < p2 => {
                let code = rng.random_range(1..16usize);
                out.extend(pauli_gate(code / 4, a).into_iter().chain(pauli_gate(code % 4, b)))?;
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Outcome probabilities of the measured qubits.
///
/// Pauli noise is averaged over `trajectories` realisations seeded with
/// `seed + t`, so `seed` is required whenever it is active. Readout noise is
/// applied analytically afterwards.
pub fn exact_distribution(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    seed: Option<u64>,
) -> Result<OutcomeDistribution> {
    circuit.validate()?;
    let ideal = |c: &Circuit| -> Result<OutcomeDistribution> { c.measure(&c.simulate()?) };
    let Some(noise) = noise else {
        return ideal(circuit);
    };
    noise.validate()?;

    let mut probs = if noise.pauli.is_active() {
        let seed = seed.ok_or_else(|| {
            Error::invalid("a seed is required to average Pauli-noise trajectories")
        })?;
        let trajectories = noise.trajectories();
        let runs: Vec<Vec<f64>> = (0..trajectories as u64)
            .into_par_iter()
            .map(|t| {
                let c = sample_pauli_trajectory(circuit, noise, seed.wrapping_add(t))?;
                Ok(ideal(&c)?.into_probs())
            })
            .collect::<Result<_>>()?;
        // Summed in trajectory order so the result does not depend on scheduling.
        let mut acc = vec![0.0; 1 << circuit.measured().len()];
        for run in &runs {
            for (a, p) in acc.iter_mut().zip(run) {
                *a += p;
            }
        }
        acc.iter_mut().for_each(|a| *a /= trajectories as f64);
        acc
    } else {
        ideal(circuit)?.into_probs()
    };

    if let Some(readout) = &noise.readout {
        let errors = circuit
            .measured()
            .iter()
            .map(|&q| readout.for_qubit(q))
            .collect::<Result<Vec<_>>>()?;
        apply_readout(&mut probs, &errors)?;
    }
    Ok(OutcomeDistribution::from_raw(circuit.measured().len(), probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{PauliNoise, Readout};

    #[test]
    fn deterministic_distribution_keeps_every_shot() {
        let d = OutcomeDistribution::deterministic(3, 5);
        let c = sample_counts(&d, 100, 1).unwrap();
        assert_eq!(c.get(5), 100);
        assert_eq!(c.shots(), 100);
    }

    #[test]
    fn zero_shots_rejected() {
        let d = OutcomeDistribution::uniform(1);
        assert!(sample_counts(&d, 0, 1).is_err());
    }

    #[test]
    fn uniform_frequencies_within_three_sigma() {
        // Binomial 3σ at 10^6 shots: 3 * sqrt(0.25 / 1e6) = 1.5e-3 < 2e-3.
        let d = OutcomeDistribution::uniform(1);
        let c = sample_counts(&d, 1_000_000, 2024).unwrap();
        assert!((c.probability(0) - 0.5).abs() < 0.002);
        assert!((c.probability(1) - 0.5).abs() < 0.002);
    }

    #[test]
    fn empty_circuit_is_ground_state() {
        let c = Circuit::new(2).unwrap();
        let d = exact_distribution(&c, None, None).unwrap();
        assert_eq!(d.probs(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn readout_on_empty_circuit() {
        let c = Circuit::new(1).unwrap();
        let noise = NoiseModel::readout_only(Readout::PerQubit(vec![[0.1, 0.0].into()]));
        let d = exact_distribution(&c, Some(&noise), None).unwrap();
        assert!((d.probs()[0] - 0.9).abs() < 1e-15);
        assert!((d.probs()[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn ghz3() {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        c.push(Gate::Cnot { control: 0, target: 2 }).unwrap();
        let d = exact_distribution(&c, None, None).unwrap();
        for (i, p) in d.probs().iter().enumerate() {
            let expected = if i == 0 || i == 7 { 0.5 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_noise_needs_seed() {
        let c = Circuit::new(1).unwrap();
        let noise = NoiseModel {
            readout: None,
            pauli: PauliNoise { p1: 0.1, p2: 0.0, trajectories: 4 },
        };
        assert!(exact_distribution(&c, Some(&noise), None).is_err());
    }

    #[test]
    fn noiseless_trajectory_is_identity() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let t = sample_pauli_trajectory(&c, &NoiseModel::ideal(), 9).unwrap();
        assert_eq!(t, c);
    }

    #[test]
    fn certain_two_qubit_fault_inserts_one_pauli() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let noise = NoiseModel {
            readout: None,
            pauli: PauliNoise { p1: 0.0, p2: 1.0, trajectories: 1 },
        };
        for seed in 0..50 {
            let t = sample_pauli_trajectory(&c, &noise, seed).unwrap();
            let inserted = &t.gates()[1..];
            assert!((1..=2).contains(&inserted.len()), "{inserted:?}");
            assert!(inserted
                .iter()
                .all(|g| matches!(g, Gate::X(_) | Gate::Y(_) | Gate::Z(_))));
            if inserted.len() == 2 {
                assert_ne!(inserted[0].targets(), inserted[1].targets());
            }
        }
    }
}

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

//! Brute-force verifiers that establish ground truth independently of the
//! analysis code paths.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{star_generators, star_statistics};
use crate::protocols::{bsm_decoder, ejm_measurement, CommNetSettings, StarSettings};
use crate::simcore::{seeded_rng, StateVector};
use crate::{Error, Result};

/// Tolerance of the basis checks.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// Deterministic classical strategy for the communication network: node `k`
/// sends bit `(maps[k] >> (2 x_k + y_k)) & 1`, the centre outputs
/// `decoder[m̄]` for the message tuple `m̄` (MSB-first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCommNetStrategy {
    pub message_maps: Vec<u8>,
    pub decoder: Vec<usize>,
}

impl ClassicalCommNetStrategy {
    pub fn n(&self) -> usize {
        self.message_maps.len()
    }

    fn messages(&self, s: &CommNetSettings) -> usize {
        self.message_maps.iter().enumerate().fold(0, |acc, (k, &map)| {
            let input = 2 * usize::from(s.x.get(k)) + usize::from(s.y.get(k));
            (acc << 1) | usize::from((map >> input) & 1 == 1)
        })
    }

    /// Number of settings, out of `4^n`, on which the strategy wins.
    pub fn wins(&self) -> u64 {
        let n = self.n();
        (0..CommNetSettings::count(n))
            .filter(|&i| {
                let s = CommNetSettings::from_index(n, i).expect("index in range");
                self.decoder[self.messages(&s)] == s.winning_outcome()
            })
            .count() as u64
    }
}

/// Best classical winning count as an exact fraction `wins / settings`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalOptimum {
    pub wins: u64,
    pub settings: u64,
}

impl ClassicalOptimum {
    pub fn probability(&self) -> f64 {
        self.wins as f64 / self.settings as f64
    }
}

/// Maximum classical `p_win` over deterministic strategies.
///
/// At `n = 2` every message-map profile is paired with every decoder. At
/// `n = 3` each profile gets its optimal decoder (majority winning outcome
/// per message tuple), which is exact because `p_win` is additive over
/// message tuples.
pub fn brute_force_commnet_classical(n: usize) -> Result<ClassicalOptimum> {
    let settings = CommNetSettings::count(n);
    let profiles = 1u64 << (4 * n);
    let profile_maps = |p: u64| (0..n).map(|k| ((p >> (4 * k)) & 0xF) as u8).collect::<Vec<u8>>();
    let best = match n {
        2 => (0..profiles)
            .into_par_iter()
            .map(|p| {
                let maps = profile_maps(p);
                (0..256usize)
                    .map(|d| {
                        let decoder = (0..4).map(|m| (d >> (2 * m)) & 3).collect();
                        ClassicalCommNetStrategy { message_maps: maps.clone(), decoder }.wins()
                    })
                    .max()
                    .unwrap_or(0)
            })
            .max(),
        3 => (0..profiles)
            .into_par_iter()
            .map(|p| {
                let probe = ClassicalCommNetStrategy { message_maps: profile_maps(p), decoder: vec![0; 8] };
                let mut tally = [[0u64; 8]; 8];
                for i in 0..settings {
                    let s = CommNetSettings::from_index(n, i).expect("index in range");
                    tally[probe.messages(&s)][s.winning_outcome()] += 1;
                }
                tally.iter().map(|row| *row.iter().max().expect("non-empty")).sum::<u64>()
            })
            .max(),
        _ => return Err(Error::UnsupportedSize(format!("classical enumeration supports n = 2 or 3, got {n}"))),
    };
    Ok(ClassicalOptimum { wins: best.unwrap_or(0), settings })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    pub n: usize,
    /// `max |⟨M_b|M_c⟩ − δ_bc|`.
    pub gram_deviation: f64,
    /// `max_b |1 − p(b | M_b)|` through the decoding circuit.
    pub decode_deviation: f64,
}

/// `|M_b⟩ = Z^{b_1} ⊗ X^{b_2} ⊗ … ⊗ X^{b_n} |GHZ⟩`, amplitude by amplitude.
pub fn ghz_basis_state(n: usize, b: usize) -> Vec<Complex64> {
    let dim = 1usize << n;
    let rest = b & ((dim >> 1) - 1);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[rest] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let sign = if b >> (n - 1) == 1 { -1.0 } else { 1.0 };
    amps[(dim >> 1) | (!rest & ((dim >> 1) - 1))] = Complex64::new(sign * FRAC_1_SQRT_2, 0.0);
    amps
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn gram_deviation(states: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b) - target).norm());
        }
    }
    worst
}

fn decode_deviation(states: &[Vec<Complex64>], gates: &[crate::simcore::Gate]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, amps) in states.iter().enumerate() {
        let mut state = StateVector::from_amplitudes(amps.clone())?;
        state.apply_all(gates)?;
        worst = worst.max((1.0 - state.probabilities()[k]).abs());
    }
    Ok(worst)
}

/// Orthonormality of the GHZ basis and correctness of its decoding circuit.
pub fn verify_ghz_basis(n: usize) -> Result<BasisReport> {
    if !(2..=12).contains(&n) {
        return Err(Error::invalid(format!("GHZ basis check needs 2 <= n <= 12, got {n}")));
    }
    let states: Vec<_> = (0..1usize << n).map(|b| ghz_basis_state(n, b)).collect();
    let qubits: Vec<usize> = (0..n).collect();
    let report = BasisReport {
        n,
        gram_deviation: gram_deviation(&states),
        decode_deviation: decode_deviation(&states, &bsm_decoder(&qubits))?,
    };
    if report.gram_deviation > BASIS_TOLERANCE || report.decode_deviation > BASIS_TOLERANCE {
        return Err(Error::Verification(format!("GHZ basis mismatch: {report:?}")));
    }
    Ok(report)
}

type Mat4 = [[Complex64; 4]; 4];

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn kron(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> Mat4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    out
}

/// The four EJM states as columns of
/// `CNOT · (H ⊗ 1) · CR_z(π/2) · (S ⊗ S) · (H ⊗ H)`, first qubit most significant.
pub fn ejm_states() -> [[Complex64; 4]; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let h = [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]];
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let s = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
    let mut cnot = [[c(0.0, 0.0); 4]; 4];
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[i][j] = c(1.0, 0.0);
    }
    let mut crz = [[c(0.0, 0.0); 4]; 4];
    for (i, v) in [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)].into_iter().enumerate() {
        crz[i][i] = v;
    }
    let u = [cnot, kron(h, id), crz, kron(s, s), kron(h, h)].iter().fold(kron(id, id), |acc, m| mat_mul(&acc, m));
    let mut states = [[c(0.0, 0.0); 4]; 4];
    for (k, state) in states.iter_mut().enumerate() {
        for (i, amp) in state.iter_mut().enumerate() {
            *amp = u[i][k];
        }
    }
    states
}

/// Eigenvalues (descending) of a qubit's reduced density matrix.
fn reduced_spectrum(state: &[Complex64; 4], keep_first: bool) -> [f64; 2] {
    let amp = |kept: usize, traced: usize| {
        if keep_first {
            state[2 * kept + traced]
        } else {
            state[2 * traced + kept]
        }
    };
    let rho = |i: usize, j: usize| -> Complex64 { (0..2).map(|t| amp(i, t) * amp(j, t).conj()).sum() };
    let (a, d, b) = (rho(0, 0).re, rho(1, 1).re, rho(0, 1));
    let half_gap = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    let mid = (a + d) / 2.0;
    [mid + half_gap, mid - half_gap]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EjmReport {
    pub gram_deviation: f64,
    pub decode_deviation: f64,
    /// Reduced spectra `[k][qubit]`.
    pub marginal_spectra: Vec<[[f64; 2]; 2]>,
    /// Largest spread of the reduced spectra across the four states and two qubits.
    pub spectrum_spread: f64,
}

/// Orthonormality, equal single-qubit spectra and decode correctness of the EJM.
pub fn verify_ejm_basis() -> Result<EjmReport> {
    let states: Vec<Vec<Complex64>> = ejm_states().iter().map(|s| s.to_vec()).collect();
    let spectra: Vec<[[f64; 2]; 2]> =
        ejm_states().iter().map(|s| [reduced_spectrum(s, true), reduced_spectrum(s, false)]).collect();
    let reference = spectra[0][0];
    let spread = spectra
        .iter()
        .flatten()
        .map(|sp| (sp[0] - reference[0]).abs().max((sp[1] - reference[1]).abs()))
        .fold(0.0, f64::max);
    let report = EjmReport {
        gram_deviation: gram_deviation(&states),
        decode_deviation: decode_deviation(&states, &ejm_measurement(0, 1)?)?,
        marginal_spectra: spectra,
        spectrum_spread: spread,
    };
    if report.gram_deviation > BASIS_TOLERANCE
        || report.decode_deviation > BASIS_TOLERANCE
        || report.spectrum_spread > BASIS_TOLERANCE
    {
        return Err(Error::Verification(format!("EJM basis mismatch: {report:?}")));
    }
    Ok(report)
}

/// Source-independent local model of the star network. Source `i` emits
/// `λ_i` with probability `weights[i][λ_i]`; branch `i` answers
/// `branch[i][λ_i][x_i]`; the centre answers `central[λ̄]` (MSB-first `b`)
/// with `λ̄` in mixed radix, source 1 most significant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalStrategy {
    pub weights: Vec<Vec<f64>>,
    pub branch: Vec<Vec<[bool; 2]>>,
    pub central: Vec<u64>,
}

impl LocalStrategy {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Every source and response constant at 0.
    pub fn constant(n: usize) -> Self {
        Self { weights: vec![vec![1.0]; n], branch: vec![vec![[false; 2]]; n], central: vec![0] }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, max_values: usize, rng: &mut R) -> Self {
        let mut weights = Vec::with_capacity(n);
        let mut branch = Vec::with_capacity(n);
        for _ in 0..n {
            let k = rng.random_range(1..=max_values);
            let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = w.iter().sum();
            weights.push(w.into_iter().map(|v| v / total).collect());
            branch.push((0..k).map(|_| [rng.random(), rng.random()]).collect());
        }
        let combos: usize = weights.iter().map(Vec::len).product();
        let central = (0..combos).map(|_| rng.random_range(0..1u64 << n)).collect();
        Self { weights, branch, central }
    }

    /// Exact `p(ā, b | x̄)` for every setting, outcome bits `(a_1..a_n, b_1..b_n)`.
    pub fn distributions(&self) -> Vec<(StarSettings, Vec<f64>)> {
        let n = self.n();
        let radices: Vec<usize> = self.weights.iter().map(Vec::len).collect();
        (0..StarSettings::count(n))
            .map(|xi| {
                let s = StarSettings::from_index(n, xi).expect("index in range");
                let mut probs = vec![0.0; 1 << (2 * n)];
                for (combo, &b) in self.central.iter().enumerate() {
                    let mut rem = combo;
                    let mut lambdas = vec![0; n];
                    for i in (0..n).rev() {
                        lambdas[i] = rem % radices[i];
                        rem /= radices[i];
                    }
                    let weight: f64 = lambdas.iter().enumerate().map(|(i, &l)| self.weights[i][l]).product();
                    let a = lambdas
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (i, &l)| (acc << 1) | usize::from(self.branch[i][l][usize::from(s.x.get(i))]));
                    probs[(a << n) | b as usize] += weight;
                }
                (s, probs)
            })
            .collect()
    }

    pub fn star_value(&self) -> Result<f64> {
        let n = self.n();
        Ok(star_statistics(n, &self.distributions(), &star_generators(n)?)?.s)
    }
}

/// Largest `S_N` over `trials` random local strategies with up to four
/// hidden values per source. Trial `t` is drawn from seed `seed + t`.
pub fn lhv_star_search(n: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::invalid("LHV search needs trials >= 1"));
    }
    if !(2..=6).contains(&n) {
        return Err(Error::UnsupportedSize(format!("LHV search supports 2 <= n <= 6, got {n}")));
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(seed.wrapping_add(t as u64));
            LocalStrategy::random(n, 4, &mut rng).star_value()
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

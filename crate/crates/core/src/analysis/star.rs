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

use super::check_complete;
use crate::protocols::StarSettings;
use crate::simcore::Frequencies;
use crate::{Error, Result};

/// One `(f_j, g_j)` pair. Masks are MSB-first over `n` bits: element `k`
/// (1-based) is bit `n − k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub f_mask: u64,
    pub f_const: bool,
    pub g_mask: u64,
}

impl Generator {
    /// `f_j(b) = parity(b & f_mask) ⊕ f_const`.
    pub fn f(&self, b: u64) -> bool {
        ((b & self.f_mask).count_ones() % 2 == 1) ^ self.f_const
    }

    /// `g_j(x̄) = parity(x̄ & g_mask)`.
    pub fn g(&self, x: u64) -> bool {
        (x & self.g_mask).count_ones() % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    n: usize,
    entries: Vec<Generator>,
}

impl GeneratorSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Generator] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same set with the constant of entry `j` flipped.
    pub fn with_flipped_const(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.entries[j].f_const ^= true;
        out
    }
}

/// Largest branch count the star statistics accept (2n simulated qubits).
pub const MAX_STAR_BRANCHES: usize = 12;

/// Even-cardinality subsets of `{1..n}`, by size then lexicographically.
fn even_subsets(n: usize) -> Vec<Vec<usize>> {
    fn combos(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..=n {
            cur.push(e);
            combos(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for k in (0..=n).step_by(2) {
        combos(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// The `2^{n−1}` generator functions of the star inequality.
///
/// `g_j` ranges over the even subsets of the inputs, the empty set first.
/// `f_j` reads `b_1` together with `g_j`'s elements other than 1. The
/// constant is 0 for the empty subset and 1 otherwise, except that the full
/// set gets 0 for `n ≥ 3`. For `n ≤ 4` this reproduces the published tables.
pub fn star_generators(n: usize) -> Result<GeneratorSet> {
    if !(2..=MAX_STAR_BRANCHES).contains(&n) {
        return Err(Error::invalid(format!("star generators need 2 <= n <= {MAX_STAR_BRANCHES}, got {n}")));
    }
    let bit = |k: usize| 1u64 << (n - k);
    let entries = even_subsets(n)
        .into_iter()
        .map(|subset| {
            let g_mask = subset.iter().fold(0, |m, &k| m | bit(k));
            let f_mask = subset.iter().filter(|&&k| k != 1).fold(bit(1), |m, &k| m | bit(k));
            let f_const = !subset.is_empty() && !(subset.len() == n && n >= 3);
            Generator { f_mask, f_const, g_mask }
        })
        .collect();
    Ok(GeneratorSet { n, entries })
}

/// `⟨A_1…A_N B_j⟩ = Σ (−1)^{f_j(b) + Σ a_i} p(ā, b)` for one setting, where
/// outcome bits are `(a_1..a_n, b_1..b_n)`.
pub fn correlator(generator: &Generator, n: usize, dist: &impl Frequencies) -> f64 {
    let low = (1u64 << n) - 1;
    dist.nonzero()
        .map(|(o, p)| {
            let o = o as u64;
            let odd = ((o >> n).count_ones() % 2 == 1) ^ generator.f(o & low);
            if odd {
                -p
            } else {
                p
            }
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarStatistics {
    pub n: usize,
    pub i: Vec<f64>,
    pub s: f64,
}

impl StarStatistics {
    /// `S_N = 2^{−(N−2)} Σ_j |I_j|^{1/N}`.
    pub fn from_i(n: usize, i: Vec<f64>) -> Self {
        let s = i.iter().map(|v| v.abs().powf(1.0 / n as f64)).sum::<f64>() / ((n - 2) as f64).exp2();
        Self { n, i, s }
    }
}

/// `a`-parity-signed marginal over `b`: `h(b) = Σ_ā (−1)^{Σ a_i} p(ā, b)`.
fn signed_b_marginal(n: usize, dist: &impl Frequencies) -> Vec<f64> {
    let low = (1usize << n) - 1;
    let mut h = vec![0.0; 1 << n];
    for (o, p) in dist.nonzero() {
        if (o >> n).count_ones() % 2 == 1 {
            h[o & low] -= p;
        } else {
            h[o & low] += p;
        }
    }
    h
}

/// `I_j = 2^{−N} Σ_x̄ (−1)^{g_j(x̄)} ⟨A_1…A_N B_j⟩` and `S_N` over all `2^N` settings.
pub fn star_statistics<D: Frequencies>(
    n: usize,
    data: &[(StarSettings, D)],
    generators: &GeneratorSet,
) -> Result<StarStatistics> {
    if generators.n() != n {
        return Err(Error::invalid(format!("generators are for n = {}, data for n = {n}", generators.n())));
    }
    if let Some((s, _)) = data.iter().find(|(s, d)| s.n() != n || d.num_bits() != 2 * n) {
        return Err(Error::invalid(format!("setting {s:?} does not match n = {n}")));
    }
    check_complete(data.iter().map(|(s, _)| s.index()), StarSettings::count(n), "star")?;

    let mut i = vec![0.0; generators.len()];
    for (s, d) in data {
        let h = signed_b_marginal(n, d);
        let x = s.index();
        for (ij, gen) in i.iter_mut().zip(generators.entries()) {
            let corr: f64 = h
                .iter()
                .enumerate()
                .map(|(b, &v)| if gen.f(b as u64) { -v } else { v })
                .sum();
            *ij += if gen.g(x) { -corr } else { corr };
        }
    }
    let scale = (n as f64).exp2();
    Ok(StarStatistics::from_i(n, i.into_iter().map(|v| v / scale).collect()))
}

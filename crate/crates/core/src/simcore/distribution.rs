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

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Anything that assigns a (possibly empirical) probability to each outcome of
/// a `num_bits`-bit register. Implemented by exact distributions, sampled
/// counts (as frequencies) and mitigated quasi-distributions.
pub trait Frequencies {
    fn num_bits(&self) -> usize;

    fn probability(&self, outcome: usize) -> f64;

    /// Outcomes with non-zero weight, in increasing order.
    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_>;

    fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.num_bits()];
        for (o, p) in self.nonzero() {
            v[o] = p;
        }
        v
    }
}

/// Exact probabilities over `2^num_bits` outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    num_bits: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub const SUM_TOLERANCE: f64 = 1e-10;

    /// Checked constructor: non-negative entries summing to 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let len = probs.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} outcomes is not a power of two")));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, &p)| p.is_nan() || p < 0.0) {
            return Err(Error::invalid(format!("negative probability {p} at outcome {i}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::invalid(format!("probabilities sum to {sum}")));
        }
        Ok(Self { num_bits: len.trailing_zeros() as usize, probs })
    }

    pub(crate) fn from_raw(num_bits: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 1 << num_bits);
        Self { num_bits, probs }
    }

    pub fn deterministic(num_bits: usize, outcome: usize) -> Self {
        let mut probs = vec![0.0; 1 << num_bits];
        probs[outcome] = 1.0;
        Self { num_bits, probs }
    }

    pub fn uniform(num_bits: usize) -> Self {
        let len = 1usize << num_bits;
        Self { num_bits, probs: vec![1.0 / len as f64; len] }
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

impl AsRef<[f64]> for OutcomeDistribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

impl Frequencies for OutcomeDistribution {
    fn num_bits(&self) -> usize {
        self.num_bits
    }

    fn probability(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        Box::new(self.probs.iter().copied().enumerate().filter(|&(_, p)| p != 0.0))
    }

    fn to_dense(&self) -> Vec<f64> {
        self.probs.clone()
    }
}

impl Frequencies for [f64] {
    fn num_bits(&self) -> usize {
        self.len().trailing_zeros() as usize
    }

    fn probability(&self, outcome: usize) -> f64 {
        self[outcome]
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        Box::new(self.iter().copied().enumerate().filter(|&(_, p)| p != 0.0))
    }
}

impl Frequencies for Vec<f64> {
    fn num_bits(&self) -> usize {
        self.as_slice().num_bits()
    }

    fn probability(&self, outcome: usize) -> f64 {
        self[outcome]
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        self.as_slice().nonzero()
    }
}

impl<T: Frequencies + ?Sized> Frequencies for &T {
    fn num_bits(&self) -> usize {
        (**self).num_bits()
    }

    fn probability(&self, outcome: usize) -> f64 {
        (**self).probability(outcome)
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        (**self).nonzero()
    }
}

/// Sparse shot counts over `num_bits`-bit outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Counts {
    num_bits: usize,
    shots: u64,
    counts: BTreeMap<usize, u64>,
}

impl Counts {
    pub fn new(num_bits: usize) -> Self {
        Self { num_bits, shots: 0, counts: BTreeMap::new() }
    }

    pub fn from_map(num_bits: usize, counts: BTreeMap<usize, u64>) -> Result<Self> {
        if let Some(&o) = counts.keys().next_back() {
            if o >> num_bits != 0 {
                return Err(Error::invalid(format!("outcome {o} exceeds {num_bits} bits")));
            }
        }
        let counts: BTreeMap<usize, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let shots = counts.values().sum();
        Ok(Self { num_bits, shots, counts })
    }

    pub fn add(&mut self, outcome: usize, count: u64) {
        if count > 0 {
            *self.counts.entry(outcome).or_insert(0) += count;
            self.shots += count;
        }
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&o, &c)| (o, c))
    }

    pub fn as_map(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }
}

impl Frequencies for Counts {
    fn num_bits(&self) -> usize {
        self.num_bits
    }

    fn probability(&self, outcome: usize) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        self.get(outcome) as f64 / self.shots as f64
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        let total = self.shots as f64;
        Box::new(self.counts.iter().map(move |(&o, &c)| (o, c as f64 / total)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_constructor() {
        assert!(OutcomeDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(OutcomeDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(OutcomeDistribution::new(vec![1.1, -0.1]).is_err());
        assert!(OutcomeDistribution::new(vec![1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn counts_as_frequencies() {
        let mut c = Counts::new(2);
        c.add(3, 3);
        c.add(0, 1);
        c.add(1, 0);
        assert_eq!(c.shots(), 4);
        assert_eq!(c.probability(3), 0.75);
        assert_eq!(c.to_dense(), vec![0.25, 0.0, 0.0, 0.75]);
        assert_eq!(c.nonzero().count(), 2);
    }
}

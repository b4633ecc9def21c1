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
use crate::protocols::CommNetSettings;
use crate::simcore::Frequencies;
use crate::{Error, Result};

/// Whether a data set covers all `4^n` settings or a uniform random subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Complete,
    Subset,
}

/// Probability of the winning outcome, per setting, in input order.
pub fn winning_probabilities<D: Frequencies>(
    n: usize,
    data: &[(CommNetSettings, D)],
    coverage: Coverage,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("the communication network needs n >= 2 nodes"));
    }
    if let Some((s, _)) = data.iter().find(|(s, d)| s.n() != n || d.num_bits() != n) {
        return Err(Error::invalid(format!("setting {s:?} does not match n = {n}")));
    }
    match coverage {
        Coverage::Complete => {
            check_complete(data.iter().map(|(s, _)| s.index()), CommNetSettings::count(n), "commnet")?
        }
        Coverage::Subset if data.is_empty() => {
            return Err(Error::IncompleteData("empty settings subset".into()))
        }
        Coverage::Subset => {}
    }
    Ok(data.iter().map(|(s, d)| d.probability(s.winning_outcome())).collect())
}

/// `p_win`: the setting average of the winning-outcome probability.
pub fn winning_probability<D: Frequencies>(
    n: usize,
    data: &[(CommNetSettings, D)],
    coverage: Coverage,
) -> Result<f64> {
    let p = winning_probabilities(n, data, coverage)?;
    Ok(p.iter().sum::<f64>() / p.len() as f64)
}

/// Lower bound `⌈(2 p_win − 1) 2^n⌉` on the number of entangled basis
/// elements of the central measurement, floored at zero.
pub fn certified_entangled_count(p_win: f64, n: usize) -> u64 {
    let dim = (n as f64).exp2();
    let m = ((2.0 * p_win.min(1.0) - 1.0) * dim).ceil();
    if m > 0.0 {
        m as u64
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{Counts, OutcomeDistribution};
    use proptest::prelude::*;

    fn all_settings(n: usize) -> Vec<CommNetSettings> {
        (0..CommNetSettings::count(n)).map(|i| CommNetSettings::from_index(n, i).unwrap()).collect()
    }

    #[test]
    fn winning_outcome_examples() {
        let s = CommNetSettings::new("110".parse().unwrap(), "101".parse().unwrap()).unwrap();
        // b1 = 1 ⊕ 1 ⊕ 0, b2 = 0 ⊕ 1, b3 = 1 ⊕ 1.
        assert_eq!(s.winning_outcome(), 0b010);
    }

    #[test]
    fn perfect_and_uniform_data() {
        let perfect: Vec<_> = all_settings(2)
            .into_iter()
            .map(|s| (s, OutcomeDistribution::deterministic(2, s.winning_outcome())))
            .collect();
        assert_eq!(winning_probability(2, &perfect, Coverage::Complete).unwrap(), 1.0);

        let uniform: Vec<_> = all_settings(3).into_iter().map(|s| (s, OutcomeDistribution::uniform(3))).collect();
        assert!((winning_probability(3, &uniform, Coverage::Complete).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn counts_on_wrong_outcomes_score_zero() {
        let data: Vec<_> = all_settings(2)
            .into_iter()
            .map(|s| {
                let mut c = Counts::new(2);
                c.add(s.winning_outcome() ^ 1, 50);
                (s, c)
            })
            .collect();
        assert_eq!(winning_probability(2, &data, Coverage::Complete).unwrap(), 0.0);
    }

    #[test]
    fn incomplete_data_is_flagged() {
        let mut data: Vec<_> = all_settings(2).into_iter().map(|s| (s, OutcomeDistribution::uniform(2))).collect();
        data.pop();
        assert!(matches!(winning_probability(2, &data, Coverage::Complete), Err(Error::IncompleteData(_))));
        assert!(winning_probability(2, &data, Coverage::Subset).is_ok());
        data.push(data[0].clone());
        assert!(winning_probability(2, &data, Coverage::Complete).is_err());
    }

    #[test]
    fn certified_count_table_values() {
        assert_eq!(certified_entangled_count(0.939, 2), 4);
        assert_eq!(certified_entangled_count(0.804, 5), 20);
        assert_eq!(certified_entangled_count(0.580, 9), 82);
        assert_eq!(certified_entangled_count(0.5, 7), 0);
        assert_eq!(certified_entangled_count(0.2, 3), 0);
        assert_eq!(certified_entangled_count(1.0, 6), 64);
    }

    proptest! {
        #[test]
        fn certified_count_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, n in 2usize..12) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(certified_entangled_count(lo, n) <= certified_entangled_count(hi, n));
            prop_assert!(certified_entangled_count(hi, n) <= 1 << n);
        }
    }
}

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

use crate::simcore::{format_outcome, Frequencies};
use crate::{Error, Result};

/// `D(p ‖ q) = Σ p_i ln(p_i / q_i)` in nats, with `0 · ln 0 = 0`.
pub fn kl_divergence(p: &(impl Frequencies + ?Sized), q: &(impl Frequencies + ?Sized)) -> Result<f64> {
    if p.num_bits() != q.num_bits() {
        return Err(Error::invalid(format!(
            "KL divergence between {}-bit and {}-bit distributions",
            p.num_bits(),
            q.num_bits()
        )));
    }
    let mut total = 0.0;
    for (i, pi) in p.nonzero().filter(|&(_, pi)| pi > 0.0) {
        let qi = q.probability(i);
        if qi <= 0.0 {
            return Err(Error::KlSupport { outcome: format_outcome(i, p.num_bits()), p: pi });
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total.max(0.0))
}

/// Marginal of the top `n` outcome bits `ā` of a `2n`-bit star outcome.
pub fn branch_marginal(n: usize, dist: &(impl Frequencies + ?Sized)) -> Vec<f64> {
    let shift = dist.num_bits().saturating_sub(n);
    let mut out = vec![0.0; 1 << n];
    for (o, p) in dist.nonzero() {
        out[o >> shift] += p;
    }
    out
}

/// Worst case over settings of `D(p(ā|x̄) ‖ ∏_i p(a_i|x̄))`, where each entry
/// of `marginals` is a joint distribution over the `n` branch bits.
pub fn source_independence_kl<D: Frequencies>(n: usize, marginals: &[D]) -> Result<f64> {
    if marginals.is_empty() {
        return Err(Error::IncompleteData("no settings for the source-independence diagnostic".into()));
    }
    let mut worst: f64 = 0.0;
    for joint in marginals {
        if joint.num_bits() != n {
            return Err(Error::invalid(format!("branch marginal has {} bits, expected {n}", joint.num_bits())));
        }
        let mut p_one = vec![0.0; n];
        for (o, p) in joint.nonzero() {
            for (k, slot) in p_one.iter_mut().enumerate() {
                if (o >> (n - 1 - k)) & 1 == 1 {
                    *slot += p;
                }
            }
        }
        let product: Vec<f64> = (0..1usize << n)
            .map(|o| {
                (0..n)
                    .map(|k| if (o >> (n - 1 - k)) & 1 == 1 { p_one[k] } else { 1.0 - p_one[k] })
                    .product()
            })
            .collect();
        worst = worst.max(kl_divergence(joint, &product)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn closed_forms() {
        assert_eq!(kl_divergence(&[0.3, 0.7][..], &[0.3, 0.7][..]).unwrap(), 0.0);
        assert!((kl_divergence(&[1.0, 0.0][..], &[0.5, 0.5][..]).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn support_violation_names_outcome() {
        match kl_divergence(&[0.5, 0.5][..], &[1.0, 0.0][..]) {
            Err(Error::KlSupport { outcome, p }) => {
                assert_eq!(outcome, "1");
                assert_eq!(p, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(kl_divergence(&[1.0, 0.0][..], &[0.25; 4][..]).is_err());
    }

    #[test]
    fn correlated_branches() {
        let joint = vec![0.5, 0.0, 0.0, 0.5];
        assert!((source_independence_kl(2, &[joint]).unwrap() - LN_2).abs() < 1e-12);
        let independent = vec![0.06, 0.14, 0.24, 0.56];
        assert!(source_independence_kl(2, &[independent]).unwrap() < 1e-15);
    }

    #[test]
    fn branch_marginal_drops_central_bits() {
        let mut d = vec![0.0; 16];
        d[0b10_01] = 0.25;
        d[0b10_11] = 0.25;
        d[0b01_00] = 0.5;
        assert_eq!(branch_marginal(2, &d), vec![0.0, 0.5, 0.5, 0.0]);
    }

    fn simplex(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.001f64..1.0, len).prop_map(|w| {
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #[test]
        fn gibbs_inequality(p in simplex(8), q in simplex(8)) {
            prop_assert!(kl_divergence(&p, &q).unwrap() >= 0.0);
        }

        #[test]
        fn diagnostic_non_negative(p in simplex(8)) {
            prop_assert!(source_independence_kl(3, &[p]).unwrap() >= 0.0);
        }
    }
}

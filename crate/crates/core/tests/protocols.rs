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


use qnet_core::oracles::{lhv_star_search, verify_ejm_basis, verify_ghz_basis, LocalStrategy};
use qnet_core::protocols::{build_commnet_circuit, CommNetSettings};
use qnet_core::simcore::{exact_distribution, seeded_rng, Frequencies};

#[test]
fn every_commnet_setting_wins_up_to_four_nodes() {
    for n in 2..=4 {
        for index in 0..CommNetSettings::count(n) {
            let s = CommNetSettings::from_index(n, index).unwrap();
            let d = exact_distribution(&build_commnet_circuit(&s).unwrap(), None, None).unwrap();
            assert!((d.probability(s.winning_outcome()) - 1.0).abs() < 1e-10, "n = {n}, setting {index}");
        }
    }
}

#[test]
fn ghz_basis_decodes_up_to_six_qubits() {
    for n in 2..=6 {
        let r = verify_ghz_basis(n).unwrap();
        assert!(r.gram_deviation < 1e-10 && r.decode_deviation < 1e-10, "{r:?}");
    }
}

#[test]
fn ejm_elements_share_reduced_spectrum() {
    let r = verify_ejm_basis().unwrap();
    // Schmidt weights of (√3 ± 1)/(2√2), confirmed by an external partial trace.
    let hi = (2.0 + 3f64.sqrt()) / 4.0;
    let lo = (2.0 - 3f64.sqrt()) / 4.0;
    for spectra in &r.marginal_spectra {
        for [a, b] in spectra {
            let (big, small) = if a > b { (a, b) } else { (b, a) };
            assert!((big - hi).abs() < 1e-10 && (small - lo).abs() < 1e-10, "{spectra:?}");
        }
    }
}

#[test]
fn lhv_search_never_beats_one() {
    for n in [2, 3] {
        let best = lhv_star_search(n, 10_000, 77).unwrap();
        assert!(best <= 1.0 + 1e-9, "n = {n}: {best}");
        assert!(best > 0.5);
    }
}

#[test]
fn random_local_strategies_respect_the_bound() {
    let mut rng = seeded_rng(5);
    for n in 2..=5 {
        for _ in 0..50 {
            assert!(LocalStrategy::random(n, 3, &mut rng).star_value().unwrap() <= 1.0 + 1e-9);
        }
    }
}

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

//! Figures of merit computed from per-setting outcome data.
//!
//! Every function here is generic over [`Frequencies`](crate::simcore::Frequencies),
//! so exact distributions and sampled counts go through the same code.

mod bilocal;
mod commnet;
mod kl;
mod star;
mod triangle;

pub use bilocal::{
    bilocal_statistics, bilocal_table, BilocalStatistics, BilocalTable, CLASSICAL_BILOCAL_BOUND,
    TETRAHEDRON,
};
pub use commnet::{certified_entangled_count, winning_probabilities, winning_probability, Coverage};
pub use kl::{branch_marginal, kl_divergence, source_independence_kl};
pub use star::{correlator, star_generators, star_statistics, Generator, GeneratorSet, StarStatistics};
pub use triangle::{triangle_case, triangle_theory, TriangleCase};

use crate::{Error, Result};

/// Checks that `indices` covers `0..total` exactly once.
pub(crate) fn check_complete(indices: impl Iterator<Item = u64>, total: u64, what: &str) -> Result<()> {
    let mut seen = vec![false; total as usize];
    for idx in indices {
        let slot = seen
            .get_mut(idx as usize)
            .ok_or_else(|| Error::invalid(format!("{what} setting index {idx} out of range")))?;
        if std::mem::replace(slot, true) {
            return Err(Error::invalid(format!("{what} setting index {idx} appears twice")));
        }
    }
    let missing = seen.iter().filter(|&&s| !s).count();
    if missing > 0 {
        return Err(Error::IncompleteData(format!("{missing} of {total} {what} settings missing")));
    }
    Ok(())
}

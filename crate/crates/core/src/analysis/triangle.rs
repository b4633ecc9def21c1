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

use crate::protocols::decode_triangle_outcome;
use crate::simcore::OutcomeDistribution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleCase {
    AllEqual,
    TwoEqual,
    AllDistinct,
}

impl TriangleCase {
    /// Ideal probability of each outcome in this case.
    pub fn probability(self) -> f64 {
        match self {
            TriangleCase::AllEqual => 25.0 / 256.0,
            TriangleCase::TwoEqual => 1.0 / 256.0,
            TriangleCase::AllDistinct => 5.0 / 256.0,
        }
    }
}

pub fn triangle_case(a: u8, b: u8, c: u8) -> TriangleCase {
    if a == b && b == c {
        TriangleCase::AllEqual
    } else if a == b || b == c || a == c {
        TriangleCase::TwoEqual
    } else {
        TriangleCase::AllDistinct
    }
}

/// Ideal triangle distribution over `(a, b, c)`, indexed like the
/// simulated outcomes: `16·(a − 1) + 4·(b − 1) + (c − 1)`.
pub fn triangle_theory() -> OutcomeDistribution {
    let probs = (0..64)
        .map(|o| {
            let (a, b, c) = decode_triangle_outcome(o);
            triangle_case(a, b, c).probability()
        })
        .collect();
    OutcomeDistribution::from_raw(6, probs)
}

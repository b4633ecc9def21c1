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
use crate::protocols::{decode_bilocal_outcome, BilocalSettings};
use crate::simcore::Frequencies;
use crate::{Error, Result};

/// Tetrahedron vertices `m_1..m_4`.
pub const TETRAHEDRON: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

/// Local bound `12√3 + 2√15` of the bilocal inequality.
pub const CLASSICAL_BILOCAL_BOUND: f64 = 28.530_576_383_241_36;

/// `p(a, b, c | x, z)` for the nine settings, indexed
/// `[setting][a][b − 1][c]` with `a, c` stored as 0 ↔ +1 and 1 ↔ −1.
#[derive(Clone, Debug, PartialEq)]
pub struct BilocalTable(pub [[[[f64; 2]; 4]; 2]; 9]);

/// Collects per-setting outcome data into a [`BilocalTable`].
pub fn bilocal_table<D: Frequencies>(data: &[(BilocalSettings, D)]) -> Result<BilocalTable> {
    if let Some((s, d)) = data.iter().find(|(_, d)| d.num_bits() != 4) {
        return Err(Error::invalid(format!("setting {s:?} has {} outcome bits, expected 4", d.num_bits())));
    }
    check_complete(data.iter().map(|(s, _)| s.index() as u64), 9, "bilocal")?;
    let mut table = [[[[0.0; 2]; 4]; 2]; 9];
    for (s, d) in data {
        for (o, p) in d.nonzero() {
            let out = decode_bilocal_outcome(o);
            let a = usize::from(out.a < 0);
            let c = usize::from(out.c < 0);
            table[s.index()][a][usize::from(out.b - 1)][c] += p;
        }
    }
    Ok(BilocalTable(table))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilocalStatistics {
    pub p_b: [f64; 4],
    /// `E_b^A(x)` as `[b − 1][x − 1]`.
    pub e_a: [[f64; 3]; 4],
    /// `E_b^C(z)` as `[b − 1][z − 1]`.
    pub e_c: [[f64; 3]; 4],
    /// `E_b^{AC}(x, z)` as `[b − 1][x − 1][z − 1]`.
    pub e_ac: [[[f64; 3]; 3]; 4],
    pub b: f64,
    pub classical_bound: f64,
    /// Central outcomes never observed in some setting; their conditional
    /// correlators are taken as 0.
    pub zero_p_b: Vec<u8>,
}

impl BilocalTable {
    /// Statistics with the inequality built on `vertices` (normally [`TETRAHEDRON`]).
    pub fn statistics(&self, vertices: &[[f64; 3]; 4]) -> BilocalStatistics {
        let t = &self.0;
        let sign = |bit: usize| if bit == 0 { 1.0 } else { -1.0 };
        let mut p_b = [0.0; 4];
        let mut e_a = [[0.0; 3]; 4];
        let mut e_c = [[0.0; 3]; 4];
        let mut e_ac = [[[0.0; 3]; 3]; 4];
        let mut zero = Vec::new();
        for b in 0..4 {
            for x in 0..3 {
                for z in 0..3 {
                    let cell = &t[3 * x + z];
                    let pb_xz: f64 = (0..2).flat_map(|a| (0..2).map(move |c| cell[a][b][c])).sum();
                    p_b[b] += pb_xz / 9.0;
                    if pb_xz <= 0.0 {
                        if !zero.contains(&(b as u8 + 1)) {
                            zero.push(b as u8 + 1);
                        }
                        continue;
                    }
                    for (a, by_b) in cell.iter().enumerate() {
                        for (c, &v) in by_b[b].iter().enumerate() {
                            let q = v / pb_xz;
                            e_a[b][x] += sign(a) * q / 3.0;
                            e_c[b][z] += sign(c) * q / 3.0;
                            e_ac[b][x][z] += sign(a) * sign(c) * q;
                        }
                    }
                }
            }
        }
        let root = |v: f64| v.max(0.0).sqrt();
        let mut total = 0.0;
        for b in 0..4 {
            let m = &vertices[b];
            for k in 0..3 {
                total += root(p_b[b] * (1.0 - m[k] * e_a[b][k]));
                total += root(p_b[b] * (1.0 + m[k] * e_c[b][k]));
            }
            for x in 0..3 {
                for z in (0..3).filter(|&z| z != x) {
                    total += root(p_b[b] * (1.0 - m[x] * m[z] * e_ac[b][x][z]));
                }
            }
        }
        BilocalStatistics {
            p_b,
            e_a,
            e_c,
            e_ac,
            b: total,
            classical_bound: CLASSICAL_BILOCAL_BOUND,
            zero_p_b: zero,
        }
    }
}

/// Bilocal correlators and `B` over all nine `(x, z)` settings.
pub fn bilocal_statistics<D: Frequencies>(data: &[(BilocalSettings, D)]) -> Result<BilocalStatistics> {
    Ok(bilocal_table(data)?.statistics(&TETRAHEDRON))
}

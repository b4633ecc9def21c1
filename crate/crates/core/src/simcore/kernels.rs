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

//! In-place amplitude kernels.
//!
//! A single-qubit gate on the qubit with index mask `m` couples amplitude `i`
//! (bit clear) with `i | m`. The array splits into blocks of length `2m` whose
//! lower half pairs element-wise with the upper half. Large registers process
//! blocks (or, for the top qubits, the pairs inside one block) on the rayon
//! pool; every pair is updated independently, so the result is bit-identical
//! to sequential application.

use num_complex::Complex64;
use rayon::prelude::*;

pub(crate) const PARALLEL_THRESHOLD: usize = 1 << 14;

pub(crate) fn for_each_pair<F>(amps: &mut [Complex64], mask: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync,
{
    let block = mask << 1;
    let run_block = |c: usize, chunk: &mut [Complex64]| {
        let (lo, hi) = chunk.split_at_mut(mask);
        let base = c * block;
        for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(base + j, a, b);
        }
    };
    if amps.len() < PARALLEL_THRESHOLD {
        amps.chunks_mut(block).enumerate().for_each(|(c, chunk)| run_block(c, chunk));
    } else if amps.len() / block >= rayon::current_num_threads() {
        amps.par_chunks_mut(block)
            .enumerate()
            .for_each(|(c, chunk)| run_block(c, chunk));
    } else {
        for (c, chunk) in amps.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(mask);
            let base = c * block;
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .for_each(|(j, (a, b))| f(base + j, a, b));
        }
    }
}

/// Multiplies every amplitude whose index has all bits of `mask` set.
pub(crate) fn phase_where_set(amps: &mut [Complex64], mask: usize, phase: Complex64) {
    let apply = |(i, a): (usize, &mut Complex64)| {
        if i & mask == mask {
            *a *= phase;
        }
    };
    if amps.len() < PARALLEL_THRESHOLD {
        amps.iter_mut().enumerate().for_each(apply);
    } else {
        amps.par_iter_mut().enumerate().for_each(apply);
    }
}

pub(crate) fn apply_matrix(amps: &mut [Complex64], mask: usize, m: [[Complex64; 2]; 2]) {
    for_each_pair(amps, mask, |_, a, b| {
        let (x, y) = (*a, *b);
        *a = m[0][0] * x + m[0][1] * y;
        *b = m[1][0] * x + m[1][1] * y;
    });
}

pub(crate) fn hadamard(amps: &mut [Complex64], mask: usize) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for_each_pair(amps, mask, |_, a, b| {
        let (x, y) = (*a, *b);
        *a = (x + y) * h;
        *b = (x - y) * h;
    });
}

pub(crate) fn pauli_x(amps: &mut [Complex64], mask: usize) {
    for_each_pair(amps, mask, |_, a, b| std::mem::swap(a, b));
}

pub(crate) fn pauli_y(amps: &mut [Complex64], mask: usize) {
    let i = Complex64::i();
    for_each_pair(amps, mask, |_, a, b| {
        let (x, y) = (*a, *b);
        *a = -i * y;
        *b = i * x;
    });
}

pub(crate) fn controlled_x(amps: &mut [Complex64], control_mask: usize, target_mask: usize) {
    for_each_pair(amps, target_mask, |i, a, b| {
        if i & control_mask != 0 {
            std::mem::swap(a, b);
        }
    });
}

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

//! Multinomial error propagation and a bootstrap cross-check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{check_complete, Coverage, GeneratorSet, StarStatistics};
use crate::protocols::{CommNetSettings, StarSettings};
use crate::simcore::{multinomial, seeded_rng, Counts, Frequencies};
use crate::{Error, Result};

/// Magnitude below which `|I_j|^{1/N − 1}` is treated as divergent.
pub const DEFAULT_EPSILON_I: f64 = 1e-9;

/// Fewest resamples [`bootstrap_sigma`] accepts.
pub const MIN_RESAMPLES: usize = 100;

/// `p(1 − p)`, clamped at zero so rounding just outside `[0, 1]` stays finite.
fn bernoulli_variance(p: f64) -> f64 {
    (p * (1.0 - p)).max(0.0)
}

/// `√(p(1 − p)/m)`.
pub fn multinomial_sigma(p: f64, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("multinomial sigma needs m >= 1 trials"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok((p * (1.0 - p) / m as f64).sqrt())
}

/// Standard deviation of `p_win` from the per-setting winning probabilities:
/// `σ² = Σ p(1 − p) / (K² m)` over the `K` settings used.
pub fn sigma_pwin(winning_probs: &[f64], m: u64, n: usize, coverage: Coverage) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("sigma_pwin needs m >= 1 shots"));
    }
    let k = winning_probs.len();
    match coverage {
        Coverage::Complete if k as u64 != CommNetSettings::count(n) => {
            return Err(Error::IncompleteData(format!("{k} of {} settings", CommNetSettings::count(n))))
        }
        Coverage::Subset if k == 0 => return Err(Error::IncompleteData("empty settings subset".into())),
        _ => {}
    }
    let var: f64 = winning_probs.iter().map(|&p| bernoulli_variance(p)).sum();
    Ok((var / ((k * k) as f64 * m as f64)).sqrt())
}

/// Covariance of the `I_j` estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrixI {
    pub n: usize,
    /// Row-major, `2^{n−1} × 2^{n−1}`.
    pub sigma: Vec<f64>,
}

impl CovarianceMatrixI {
    pub fn dim(&self) -> usize {
        1 << (self.n - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sigma[i * self.dim() + j]
    }
}

/// `σ_ij = (1/(4^N m)) Σ_{x̄,ā,b} (−1)^{f_i(b)+f_j(b)+g_i(x̄)+g_j(x̄)} p(1 − p)`.
pub fn covariance_i<D: Frequencies>(
    n: usize,
    data: &[(StarSettings, D)],
    generators: &GeneratorSet,
    m: u64,
) -> Result<CovarianceMatrixI> {
    if m == 0 {
        return Err(Error::invalid("covariance needs m >= 1 shots"));
    }
    if generators.n() != n {
        return Err(Error::invalid("generator set does not match n"));
    }
    check_complete(data.iter().map(|(s, _)| s.index()), StarSettings::count(n), "star")?;
    let gens = generators.entries();
    let dim = gens.len();
    let low = (1usize << n) - 1;
    let mut sigma = vec![0.0; dim * dim];
    for (s, d) in data {
        // Σ_ā p(1 − p) grouped by b; the ā signs square away.
        let mut w = vec![0.0; 1 << n];
        for (o, p) in d.nonzero() {
            w[o & low] += bernoulli_variance(p);
        }
        // sign_j(b) = (−1)^{f_j(b) + g_j(x̄)}
        let x = s.index();
        let signs: Vec<Vec<f64>> = gens
            .iter()
            .map(|g| (0..1u64 << n).map(|b| if g.f(b) ^ g.g(x) { -1.0 } else { 1.0 }).collect())
            .collect();
        for i in 0..dim {
            for j in i..dim {
                let v: f64 = w.iter().enumerate().map(|(b, &wb)| signs[i][b] * signs[j][b] * wb).sum();
                sigma[i * dim + j] += v;
            }
        }
    }
    let scale = (2.0 * n as f64).exp2() * m as f64;
    for i in 0..dim {
        for j in i..dim {
            let v = sigma[i * dim + j] / scale;
            sigma[i * dim + j] = v;
            sigma[j * dim + i] = v;
        }
    }
    Ok(CovarianceMatrixI { n, sigma })
}

/// `σ²_S = (1/(N² 4^{N−2})) Σ_{i,j} |I_i|^{1/N−1} |I_j|^{1/N−1} σ_ij`.
pub fn sigma_sn(stats: &StarStatistics, cov: &CovarianceMatrixI) -> Result<f64> {
    sigma_sn_with_epsilon(stats, cov, DEFAULT_EPSILON_I)
}

pub fn sigma_sn_with_epsilon(stats: &StarStatistics, cov: &CovarianceMatrixI, epsilon: f64) -> Result<f64> {
    let n = stats.n;
    if cov.n != n || stats.i.len() != cov.dim() {
        return Err(Error::invalid("statistics and covariance dimensions differ"));
    }
    if let Some((index, &value)) = stats.i.iter().enumerate().find(|(_, v)| v.abs() < epsilon) {
        return Err(Error::DegenerateDerivative { index, value, epsilon });
    }
    let nf = n as f64;
    let d: Vec<f64> = stats.i.iter().map(|v| v.abs().powf(1.0 / nf - 1.0)).collect();
    let mut var = 0.0;
    for (i, di) in d.iter().enumerate() {
        for (j, dj) in d.iter().enumerate() {
            var += di * dj * cov.get(i, j);
        }
    }
    var /= nf * nf * (2.0 * (nf - 2.0)).exp2();
    Ok(var.max(0.0).sqrt())
}

/// Standard deviation of `statistic` over multinomial resamples of every
/// setting's counts. Resample `r` draws from a generator seeded `seed + r`;
/// settings are resampled in input order.
pub fn bootstrap_sigma<F>(counts: &[Counts], statistic: F, resamples: usize, seed: u64) -> Result<f64>
where
    F: Fn(&[Counts]) -> Result<f64> + Sync,
{
    if resamples < MIN_RESAMPLES {
        return Err(Error::invalid(format!("bootstrap needs at least {MIN_RESAMPLES} resamples")));
    }
    if let Some(c) = counts.iter().find(|c| c.shots() == 0) {
        return Err(Error::invalid(format!("cannot resample an empty {}-bit count table", c.num_bits())));
    }
    let values = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(seed.wrapping_add(r as u64));
            let resampled: Vec<Counts> = counts.iter().map(|c| multinomial(c, c.shots(), &mut rng)).collect();
            statistic(&resampled)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = values.iter().sum::<f64>() / resamples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    Ok(var.sqrt())
}

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

use std::fs;
use std::time::Instant;

use rand::seq::index::sample;
use rayon::prelude::*;

use super::config::{CalibrationSource, ExperimentConfig, ExperimentKind, MitigationMethod};
use super::record::{
    outcome_bits, BilocalDerived, CommnetDerived, Derived, ExperimentRecord, Meta, MitigationSummary, SettingData,
    SettingKey, SettingRecord, StarDerived, Statistics, TriangleDerived,
};
use crate::analysis::{
    bilocal_statistics, branch_marginal, certified_entangled_count, kl_divergence, source_independence_kl,
    star_generators, star_statistics, triangle_theory, winning_probabilities, Coverage, GeneratorSet,
};
use crate::mitigation::{build_calibration, mitigate_lsq, CalibrationMatrix, CalibrationMode, PinvFilter};
use crate::protocols::{
    build_bilocal_circuit, build_commnet_circuit, build_star_circuit, build_triangle_circuit, BilocalSettings,
    CommNetSettings, StarSettings,
};
use crate::simcore::{
    exact_distribution, sample_counts, seeded_rng, Circuit, Counts, Frequencies, NoiseModel, Readout, ReadoutError,
};
use crate::stats::{bootstrap_sigma, covariance_i, sigma_pwin, sigma_sn};
use crate::{Error, Result};

const STREAM_TRAJECTORIES: u64 = 1;
const STREAM_SHOTS: u64 = 2;
const STREAM_SUBSET: u64 = 3;
const STREAM_BOOTSTRAP: u64 = 4;
const STREAM_CALIBRATION: u64 = 5;

/// Seed for `(stream, index)` derived from the base seed by SplitMix64 mixing.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Settings a run iterates over, in index order.
pub fn settings_for(config: &ExperimentConfig) -> Result<(Vec<SettingKey>, Coverage)> {
    let n = config.n;
    match config.experiment {
        ExperimentKind::Commnet => {
            let n = n.ok_or_else(|| Error::invalid("commnet needs n"))?;
            let total = CommNetSettings::count(n);
            let subset = config.settings_subset.filter(|&k| (k as u64) < total);
            let (indices, coverage) = match subset {
                Some(k) => {
                    let mut rng = seeded_rng(derive_seed(config.seed, STREAM_SUBSET, 0));
                    let total = usize::try_from(total).map_err(|_| Error::invalid("too many settings"))?;
                    let mut picked: Vec<u64> = sample(&mut rng, total, k).into_iter().map(|i| i as u64).collect();
                    picked.sort_unstable();
                    (picked, Coverage::Subset)
                }
                None => ((0..total).collect(), Coverage::Complete),
            };
            let keys = indices
                .into_iter()
                .map(|i| CommNetSettings::from_index(n, i).map(SettingKey::CommNet))
                .collect::<Result<_>>()?;
            Ok((keys, coverage))
        }
        ExperimentKind::Star => {
            let n = n.ok_or_else(|| Error::invalid("star needs n"))?;
            let keys = (0..StarSettings::count(n))
                .map(|i| StarSettings::from_index(n, i).map(SettingKey::Star))
                .collect::<Result<_>>()?;
            Ok((keys, Coverage::Complete))
        }
        ExperimentKind::Bilocal => Ok((BilocalSettings::all().map(SettingKey::Bilocal).collect(), Coverage::Complete)),
        ExperimentKind::Triangle => Ok((vec![SettingKey::Triangle], Coverage::Complete)),
        ExperimentKind::Calibrate => Ok((Vec::new(), Coverage::Complete)),
    }
}

pub fn circuit_for(key: &SettingKey) -> Result<Circuit> {
    match key {
        SettingKey::CommNet(s) => build_commnet_circuit(s),
        SettingKey::Star(s) => build_star_circuit(s),
        SettingKey::Bilocal(s) => build_bilocal_circuit(s),
        SettingKey::Triangle => build_triangle_circuit(),
    }
}

/// Simulates every setting of `config` and analyses the result.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let start = Instant::now();
    config.validate()?;
    let shots = config.resolved_shots()?;
    let (keys, _) = settings_for(config)?;
    let noise = config.run_noise();
    let data: Vec<SettingData> = keys
        .par_iter()
        .map(|key| {
            let circuit = circuit_for(key)?;
            let index = key.index();
            let dist = exact_distribution(&circuit, noise, Some(derive_seed(config.seed, STREAM_TRAJECTORIES, index)))?;
            if config.exact_probs {
                Ok(SettingData::Probs(dist))
            } else {
                Ok(SettingData::Counts(sample_counts(&dist, shots, derive_seed(config.seed, STREAM_SHOTS, index))?))
            }
        })
        .collect::<Result<_>>()?;
    let settings: Vec<SettingRecord> = keys.iter().zip(&data).map(|(k, d)| SettingRecord::new(*k, d)).collect();
    let derived = analyze(config, &settings)?;
    Ok(ExperimentRecord {
        config: config.clone(),
        settings,
        derived,
        meta: Meta {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            shots_per_setting: shots,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// Recomputes the derived statistics from a record's stored data.
pub fn analyze_record(record: &ExperimentRecord) -> Result<Derived> {
    analyze(&record.config, &record.settings)
}

/// Readout errors of the measured bits of `circuit`, in output order.
fn measured_readout(noise: Option<&NoiseModel>, measured: &[usize]) -> Result<NoiseModel> {
    let errors: Vec<ReadoutError> = match noise.and_then(|m| m.readout.as_ref()) {
        Some(r) => measured.iter().map(|&q| r.for_qubit(q)).collect::<Result<_>>()?,
        None => vec![ReadoutError::default(); measured.len()],
    };
    Ok(NoiseModel::readout_only(Readout::PerQubit(errors)))
}

fn calibration_mode(config: &ExperimentConfig) -> Result<CalibrationMode> {
    Ok(if config.exact_probs {
        CalibrationMode::Exact
    } else {
        CalibrationMode::Sampled {
            shots: config.resolved_shots()?,
            seed: derive_seed(config.seed, STREAM_CALIBRATION, 0),
        }
    })
}

fn load_calibration(config: &ExperimentConfig, keys: &[SettingKey], bits: usize) -> Result<CalibrationMatrix> {
    let cal = match &config.calibration {
        CalibrationSource::Exact => {
            let measured = match keys.first() {
                Some(k) => circuit_for(k)?.measured().to_vec(),
                None => (0..bits).collect(),
            };
            build_calibration(bits, &measured_readout(config.noise.as_ref(), &measured)?, CalibrationMode::Exact)?
        }
        CalibrationSource::Path(p) => {
            let cal: CalibrationMatrix = serde_json::from_str(&fs::read_to_string(p)?)?;
            cal.validate()?;
            cal
        }
    };
    if cal.n() != bits {
        return Err(Error::invalid(format!("calibration is for {} bits, data has {bits}", cal.n())));
    }
    Ok(cal)
}

enum Mitigator {
    None,
    Pinv(PinvFilter),
    Lsq(CalibrationMatrix, f64),
}

impl Mitigator {
    fn apply<D: Frequencies + Sync>(&self, data: &[D]) -> Result<Vec<Vec<f64>>> {
        match self {
            Mitigator::None => Ok(data.iter().map(|d| d.to_dense()).collect()),
            Mitigator::Pinv(f) => data.iter().map(|d| f.apply(d).map(|q| q.values)).collect(),
            Mitigator::Lsq(cal, tol) => {
                data.par_iter().map(|d| mitigate_lsq(d, cal, *tol).map(|p| p.into_probs())).collect()
            }
        }
    }
}

/// The single figure of merit bootstrapped for an experiment.
fn headline<D: Frequencies>(
    kind: ExperimentKind,
    n: Option<usize>,
    keys: &[SettingKey],
    data: &[D],
    coverage: Coverage,
    generators: Option<&GeneratorSet>,
) -> Result<f64> {
    match kind {
        ExperimentKind::Commnet => {
            let n = n.expect("validated");
            let pairs: Vec<(CommNetSettings, &D)> = keys
                .iter()
                .zip(data)
                .filter_map(|(k, d)| if let SettingKey::CommNet(s) = k { Some((*s, d)) } else { None })
                .collect();
            let p = winning_probabilities(n, &pairs, coverage)?;
            Ok(p.iter().sum::<f64>() / p.len() as f64)
        }
        ExperimentKind::Star => {
            let n = n.expect("validated");
            Ok(star_statistics(n, &star_pairs(keys, data), generators.expect("star generators"))?.s)
        }
        ExperimentKind::Bilocal => Ok(bilocal_statistics(&bilocal_pairs(keys, data))?.b),
        ExperimentKind::Triangle | ExperimentKind::Calibrate => Err(Error::invalid("no headline statistic")),
    }
}

fn star_pairs<'a, D>(keys: &[SettingKey], data: &'a [D]) -> Vec<(StarSettings, &'a D)> {
    keys.iter()
        .zip(data)
        .filter_map(|(k, d)| if let SettingKey::Star(s) = k { Some((*s, d)) } else { None })
        .collect()
}

fn bilocal_pairs<'a, D>(keys: &[SettingKey], data: &'a [D]) -> Vec<(BilocalSettings, &'a D)> {
    keys.iter()
        .zip(data)
        .filter_map(|(k, d)| if let SettingKey::Bilocal(s) = k { Some((*s, d)) } else { None })
        .collect()
}

/// Derived statistics of `settings` under `config`. Deterministic: the same
/// inputs give bit-identical output regardless of thread count.
pub fn analyze(config: &ExperimentConfig, settings: &[SettingRecord]) -> Result<Derived> {
    config.validate()?;
    let kind = config.experiment;
    let n = config.n;
    let bits = outcome_bits(kind, n)?;
    let shots = config.resolved_shots()?;

    if kind == ExperimentKind::Calibrate {
        let bits = n.expect("validated");
        let noise = measured_readout(config.noise.as_ref(), &(0..bits).collect::<Vec<_>>())?;
        let calibration = build_calibration(bits, &noise, calibration_mode(config)?)?;
        return Ok(Derived { statistics: Statistics::Calibrate { calibration }, mitigation: None });
    }

    let keys: Vec<SettingKey> = settings.iter().map(|s| s.setting).collect();
    let raw: Vec<SettingData> = settings.iter().map(|s| s.data(bits)).collect::<Result<_>>()?;
    let coverage = if kind == ExperimentKind::Commnet && (keys.len() as u64) < CommNetSettings::count(n.unwrap_or(0)) {
        if config.settings_subset.is_none() {
            return Err(Error::IncompleteData(format!("{} commnet settings without a subset flag", keys.len())));
        }
        Coverage::Subset
    } else {
        Coverage::Complete
    };

    let (mitigator, summary) = match config.mitigation {
        MitigationMethod::None => (Mitigator::None, None),
        method => {
            let cal = load_calibration(config, &keys, bits)?;
            let mode = cal.mode();
            match method {
                MitigationMethod::Pinv => {
                    let filter = PinvFilter::new(&cal)?;
                    let condition_number = Some(filter.condition_number());
                    (Mitigator::Pinv(filter), Some(MitigationSummary { method, calibration_mode: mode, condition_number }))
                }
                _ => (
                    Mitigator::Lsq(cal, config.lsq_tolerance),
                    Some(MitigationSummary { method, calibration_mode: mode, condition_number: None }),
                ),
            }
        }
    };
    let data = mitigator.apply(&raw)?;

    let counts: Option<Vec<Counts>> = raw
        .iter()
        .map(|d| match d {
            SettingData::Counts(c) => Some(c.clone()),
            SettingData::Probs(_) => None,
        })
        .collect();
    let generators = match kind {
        ExperimentKind::Star => Some(star_generators(n.expect("validated"))?),
        _ => None,
    };
    let bootstrap = |kind: ExperimentKind| -> Result<Option<f64>> {
        let Some(counts) = counts.as_ref().filter(|_| config.bootstrap_resamples > 0) else { return Ok(None) };
        let statistic = |resampled: &[Counts]| -> Result<f64> {
            let mitigated = mitigator.apply(resampled)?;
            headline(kind, n, &keys, &mitigated, coverage, generators.as_ref())
        };
        bootstrap_sigma(
            counts,
            statistic,
            config.bootstrap_resamples,
            derive_seed(config.seed, STREAM_BOOTSTRAP, 0),
        )
        .map(Some)
    };

    let statistics = match kind {
        ExperimentKind::Commnet => {
            let n = n.expect("validated");
            let pairs: Vec<(CommNetSettings, &Vec<f64>)> = keys
                .iter()
                .zip(&data)
                .filter_map(|(k, d)| if let SettingKey::CommNet(s) = k { Some((*s, d)) } else { None })
                .collect();
            if pairs.len() != keys.len() {
                return Err(Error::invalid("non-commnet setting in a commnet record"));
            }
            let p = winning_probabilities(n, &pairs, coverage)?;
            let p_win = p.iter().sum::<f64>() / p.len() as f64;
            Statistics::Commnet(CommnetDerived {
                n,
                p_win,
                certified_entangled: certified_entangled_count(p_win, n),
                coverage,
                settings_used: p.len(),
                sigma_pwin: sigma_pwin(&p, shots, n, coverage)?,
                sigma_pwin_bootstrap: bootstrap(kind)?,
            })
        }
        ExperimentKind::Star => {
            let n = n.expect("validated");
            let generators = generators.as_ref().expect("star generators");
            let pairs = star_pairs(&keys, &data);
            let stats = star_statistics(n, &pairs, generators)?;
            let cov = covariance_i(n, &pairs, generators, shots)?;
            let (sigma_s, sigma_s_note) = match sigma_sn(&stats, &cov) {
                Ok(s) => (Some(s), None),
                Err(e @ Error::DegenerateDerivative { .. }) => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            let marginals: Vec<Vec<f64>> = raw.iter().map(|d| branch_marginal(n, d)).collect();
            Statistics::Star(StarDerived {
                n,
                i: stats.i,
                s: stats.s,
                sigma_s,
                sigma_s_note,
                sigma_s_bootstrap: bootstrap(kind)?,
                kl_source_independence: source_independence_kl(n, &marginals)?,
            })
        }
        ExperimentKind::Bilocal => Statistics::Bilocal(BilocalDerived {
            statistics: bilocal_statistics(&bilocal_pairs(&keys, &data))?,
            sigma_b_bootstrap: bootstrap(kind)?,
        }),
        ExperimentKind::Triangle => {
            let distribution = data.into_iter().next().ok_or_else(|| Error::IncompleteData("no triangle data".into()))?;
            let kl_vs_theory = if distribution.iter().all(|&p| p >= 0.0) {
                Some(kl_divergence(&distribution, &triangle_theory())?)
            } else {
                None
            };
            Statistics::Triangle(TriangleDerived { distribution, kl_vs_theory })
        }
        ExperimentKind::Calibrate => unreachable!("handled above"),
    };
    Ok(Derived { statistics, mitigation: summary })
}

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
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use crate::analysis::{BilocalStatistics, Coverage};
use crate::mitigation::{CalibrationMatrix, CalibrationMode};
use crate::protocols::{BilocalSettings, CommNetSettings, StarSettings};
use crate::simcore::{format_outcome, parse_outcome, Counts, Frequencies, OutcomeDistribution};
use crate::{Error, Result};

/// Setting of one circuit. Serialises as `{"x","y"}` bitstrings (commnet),
/// `{"x"}` (star), `{"x","z"}` integers (bilocal) or `null` (triangle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SettingKey {
    CommNet(CommNetSettings),
    Star(StarSettings),
    Bilocal(BilocalSettings),
    Triangle,
}

impl SettingKey {
    pub fn index(&self) -> u64 {
        match self {
            SettingKey::CommNet(s) => s.index(),
            SettingKey::Star(s) => s.index(),
            SettingKey::Bilocal(s) => s.index() as u64,
            SettingKey::Triangle => 0,
        }
    }

    /// Short label, e.g. `x=01;y=10`.
    pub fn label(&self) -> String {
        match self {
            SettingKey::CommNet(s) => format!("x={};y={}", s.x, s.y),
            SettingKey::Star(s) => format!("x={}", s.x),
            SettingKey::Bilocal(s) => format!("x={};z={}", s.x, s.z),
            SettingKey::Triangle => "none".into(),
        }
    }
}

/// Outcome data of one setting: sampled counts or exact probabilities.
#[derive(Clone, Debug, PartialEq)]
pub enum SettingData {
    Counts(Counts),
    Probs(OutcomeDistribution),
}

impl Frequencies for SettingData {
    fn num_bits(&self) -> usize {
        match self {
            SettingData::Counts(c) => c.num_bits(),
            SettingData::Probs(p) => Frequencies::num_bits(p),
        }
    }

    fn probability(&self, outcome: usize) -> f64 {
        match self {
            SettingData::Counts(c) => c.probability(outcome),
            SettingData::Probs(p) => p.probability(outcome),
        }
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            SettingData::Counts(c) => c.nonzero(),
            SettingData::Probs(p) => p.nonzero(),
        }
    }

    fn to_dense(&self) -> Vec<f64> {
        match self {
            SettingData::Counts(c) => c.to_dense(),
            SettingData::Probs(p) => p.probs().to_vec(),
        }
    }
}

/// One entry of the record's `settings` array. Exactly one of `counts` and
/// `probs` is present; outcome keys are MSB-first bitstrings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingRecord {
    pub setting: SettingKey,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<BTreeMap<String, f64>>,
}

impl SettingRecord {
    pub fn new(setting: SettingKey, data: &SettingData) -> Self {
        match data {
            SettingData::Counts(c) => Self {
                setting,
                counts: Some(c.iter().map(|(o, n)| (format_outcome(o, c.num_bits()), n)).collect()),
                probs: None,
            },
            SettingData::Probs(p) => Self {
                setting,
                counts: None,
                probs: Some(
                    p.nonzero().map(|(o, v)| (format_outcome(o, Frequencies::num_bits(p)), v)).collect(),
                ),
            },
        }
    }

    pub fn data(&self, num_bits: usize) -> Result<SettingData> {
        let outcome = |key: &str| -> Result<usize> {
            if key.len() != num_bits {
                return Err(Error::invalid(format!("outcome {key:?} should have {num_bits} bits")));
            }
            parse_outcome(key)
        };
        match (&self.counts, &self.probs) {
            (Some(counts), None) => {
                let map = counts.iter().map(|(k, &v)| Ok((outcome(k)?, v))).collect::<Result<_>>()?;
                Ok(SettingData::Counts(Counts::from_map(num_bits, map)?))
            }
            (None, Some(probs)) => {
                let mut dense = vec![0.0; 1 << num_bits];
                for (k, &v) in probs {
                    dense[outcome(k)?] = v;
                }
                Ok(SettingData::Probs(OutcomeDistribution::new(dense)?))
            }
            _ => Err(Error::invalid(format!(
                "setting {} needs exactly one of counts and probs",
                self.setting.label()
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommnetDerived {
    pub n: usize,
    pub p_win: f64,
    pub certified_entangled: u64,
    pub coverage: Coverage,
    pub settings_used: usize,
    pub sigma_pwin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_pwin_bootstrap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarDerived {
    pub n: usize,
    pub i: Vec<f64>,
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_s: Option<f64>,
    /// Why `sigma_s` is absent (vanishing `I_j`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_s_note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_s_bootstrap: Option<f64>,
    /// Worst-case KL of the raw branch marginals against their product.
    pub kl_source_independence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilocalDerived {
    pub statistics: BilocalStatistics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_b_bootstrap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleDerived {
    /// `p(a, b, c)` indexed `16(a−1) + 4(b−1) + (c−1)`.
    pub distribution: Vec<f64>,
    /// `D(observed ‖ ideal)`; absent when the estimate has negative entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kl_vs_theory: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Statistics {
    Commnet(CommnetDerived),
    Star(StarDerived),
    Bilocal(BilocalDerived),
    Triangle(TriangleDerived),
    Calibrate { calibration: CalibrationMatrix },
}

impl Statistics {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Statistics::Commnet(_) => ExperimentKind::Commnet,
            Statistics::Star(_) => ExperimentKind::Star,
            Statistics::Bilocal(_) => ExperimentKind::Bilocal,
            Statistics::Triangle(_) => ExperimentKind::Triangle,
            Statistics::Calibrate { .. } => ExperimentKind::Calibrate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MitigationSummary {
    pub method: super::config::MitigationMethod,
    pub calibration_mode: CalibrationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub statistics: Statistics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigation: Option<MitigationSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub version: String,
    pub shots_per_setting: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub settings: Vec<SettingRecord>,
    pub derived: Derived,
    pub meta: Meta,
}

impl ExperimentRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Outcome bits per setting for an experiment.
pub fn outcome_bits(kind: ExperimentKind, n: Option<usize>) -> Result<usize> {
    match kind {
        ExperimentKind::Commnet => n.ok_or_else(|| Error::invalid("commnet needs n")),
        ExperimentKind::Star => Ok(2 * n.ok_or_else(|| Error::invalid("star needs n"))?),
        ExperimentKind::Bilocal => Ok(4),
        ExperimentKind::Triangle => Ok(6),
        ExperimentKind::Calibrate => n.ok_or_else(|| Error::invalid("calibrate needs n")),
    }
}

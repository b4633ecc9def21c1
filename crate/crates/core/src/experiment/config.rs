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

use std::fmt;
use std::path::PathBuf;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::simcore::NoiseModel;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Commnet,
    Star,
    Bilocal,
    Triangle,
    Calibrate,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ExperimentKind::Commnet => "commnet",
            ExperimentKind::Star => "star",
            ExperimentKind::Bilocal => "bilocal",
            ExperimentKind::Triangle => "triangle",
            ExperimentKind::Calibrate => "calibrate",
        };
        f.write_str(name)
    }
}

/// Shots per setting: a count, or the published schedule (`"paper-default"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shots {
    Count(u64),
    PaperDefault,
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Count(c) => s.serialize_u64(*c),
            Shots::PaperDefault => s.serialize_str("paper-default"),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ShotsVisitor;
        impl Visitor<'_> for ShotsVisitor {
            type Value = Shots;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a shot count or \"paper-default\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Shots, E> {
                Ok(Shots::Count(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Shots, E> {
                u64::try_from(v).map(Shots::Count).map_err(|_| E::custom("shot count must be non-negative"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Shots, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(ShotsVisitor)
    }
}

impl std::str::FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-default" => Ok(Shots::PaperDefault),
            other => other
                .parse()
                .map(Shots::Count)
                .map_err(|_| Error::invalid(format!("shots must be an integer or \"paper-default\", got {other:?}"))),
        }
    }
}

/// Published shots per circuit. The triangle and calibration schedules are
/// not published; 10^5 and 8192 are used.
pub fn paper_default_shots(kind: ExperimentKind, n: Option<usize>) -> Result<u64> {
    const COMMNET: [u64; 9] = [24_576, 8_192, 8_192, 1_024, 128, 32, 32, 16, 8];
    let need_n = || n.ok_or_else(|| Error::invalid(format!("{kind} needs n")));
    match kind {
        ExperimentKind::Commnet => {
            let n = need_n()?;
            n.checked_sub(2)
                .and_then(|i| COMMNET.get(i).copied())
                .ok_or_else(|| Error::invalid(format!("no published commnet schedule for n = {n}")))
        }
        ExperimentKind::Star => match need_n()? {
            2 | 3 => Ok(120_000),
            4 | 5 => Ok(200_000),
            6 => Ok(4_900_000),
            n => Err(Error::invalid(format!("no published star schedule for n = {n}"))),
        },
        ExperimentKind::Bilocal => Ok(330_000),
        ExperimentKind::Triangle => Ok(100_000),
        ExperimentKind::Calibrate => Ok(8_192),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MitigationMethod {
    #[default]
    None,
    Pinv,
    Lsq,
}

/// Where the calibration matrix comes from: `"exact"` or a JSON file path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum CalibrationSource {
    #[default]
    Exact,
    Path(PathBuf),
}

impl Serialize for CalibrationSource {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CalibrationSource::Exact => s.serialize_str("exact"),
            CalibrationSource::Path(p) => s.serialize_str(&p.to_string_lossy()),
        }
    }
}

impl<'de> Deserialize<'de> for CalibrationSource {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(if s == "exact" { CalibrationSource::Exact } else { CalibrationSource::Path(s.into()) })
    }
}

fn default_resamples() -> usize {
    1000
}

fn default_lsq_tolerance() -> f64 {
    1e-9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub shots: Shots,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    /// Noise the circuits actually run under when it differs from the
    /// calibration's (stale calibration).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<NoiseModel>,
    #[serde(default)]
    pub mitigation: MitigationMethod,
    #[serde(default)]
    pub calibration: CalibrationSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings_subset: Option<usize>,
    #[serde(default)]
    pub exact_probs: bool,
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: usize,
    #[serde(default = "default_lsq_tolerance")]
    pub lsq_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, n: Option<usize>, shots: Shots, seed: u64) -> Self {
        Self {
            experiment,
            n,
            shots,
            seed,
            noise: None,
            drift: None,
            mitigation: MitigationMethod::None,
            calibration: CalibrationSource::Exact,
            settings_subset: None,
            exact_probs: false,
            bootstrap_resamples: default_resamples(),
            lsq_tolerance: default_lsq_tolerance(),
            output: None,
        }
    }

    pub fn resolved_shots(&self) -> Result<u64> {
        let shots = match self.shots {
            Shots::Count(c) => c,
            Shots::PaperDefault => paper_default_shots(self.experiment, self.n)?,
        };
        if shots == 0 {
            return Err(Error::invalid("shots must be >= 1"));
        }
        Ok(shots)
    }

    /// Noise the circuits run under.
    pub fn run_noise(&self) -> Option<&NoiseModel> {
        self.drift.as_ref().or(self.noise.as_ref())
    }

    pub fn validate(&self) -> Result<()> {
        self.resolved_shots()?;
        for noise in [&self.noise, &self.drift].into_iter().flatten() {
            noise.validate()?;
        }
        match self.experiment {
            ExperimentKind::Commnet | ExperimentKind::Star => match self.n {
                Some(n) if n >= 2 => {}
                _ => return Err(Error::invalid(format!("{} needs n >= 2", self.experiment))),
            },
            ExperimentKind::Calibrate => match self.n {
                Some(n) if n >= 1 => {}
                _ => return Err(Error::invalid("calibrate needs n >= 1")),
            },
            ExperimentKind::Bilocal | ExperimentKind::Triangle => {}
        }
        if self.settings_subset.is_some() && self.experiment != ExperimentKind::Commnet {
            return Err(Error::invalid("settings_subset applies to commnet only"));
        }
        if self.settings_subset == Some(0) {
            return Err(Error::invalid("settings_subset must be >= 1"));
        }
        if self.mitigation != MitigationMethod::None && self.experiment == ExperimentKind::Calibrate {
            return Err(Error::invalid("calibrate runs take no mitigation"));
        }
        if self.lsq_tolerance.is_nan() || self.lsq_tolerance <= 0.0 {
            return Err(Error::invalid("lsq_tolerance must be positive"));
        }
        if self.bootstrap_resamples != 0 && self.bootstrap_resamples < crate::stats::MIN_RESAMPLES {
            return Err(Error::invalid(format!(
                "bootstrap_resamples must be 0 or >= {}",
                crate::stats::MIN_RESAMPLES
            )));
        }
        Ok(())
    }
}

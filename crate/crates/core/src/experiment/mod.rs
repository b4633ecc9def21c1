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

//! Experiment orchestration: configuration, simulation across settings,
//! JSON records and export.

mod config;
mod export;
mod record;
mod runner;

pub use config::{
    paper_default_shots, CalibrationSource, ExperimentConfig, ExperimentKind, MitigationMethod, Shots,
};
pub use export::{export_csv, export_plotdata};
pub use record::{
    outcome_bits, BilocalDerived, CommnetDerived, Derived, ExperimentRecord, Meta, MitigationSummary, SettingData,
    SettingKey, SettingRecord, StarDerived, Statistics, TriangleDerived,
};
pub use runner::{analyze, analyze_record, circuit_for, derive_seed, run, settings_for};

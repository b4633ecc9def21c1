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

//! `qnet`: run network experiments, build calibration matrices and export
//! records.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qnet_core::experiment::{
    export_csv, export_plotdata, run, CalibrationSource, ExperimentConfig, ExperimentKind,
    ExperimentRecord, MitigationMethod, Shots, Statistics,
};
use qnet_core::mitigation::{build_calibration, CalibrationMode};
use qnet_core::simcore::NoiseModel;

#[derive(Parser)]
#[command(name = "qnet", version, about = "Quantum-network correlation experiments on a state-vector simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Commnet,
    Star,
    Bilocal,
    Triangle,
}

impl From<Experiment> for ExperimentKind {
    fn from(e: Experiment) -> Self {
        match e {
            Experiment::Commnet => ExperimentKind::Commnet,
            Experiment::Star => ExperimentKind::Star,
            Experiment::Bilocal => ExperimentKind::Bilocal,
            Experiment::Triangle => ExperimentKind::Triangle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mitigation {
    None,
    Pinv,
    Lsq,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Plotdata,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an experiment and write its record as JSON.
    Run {
        /// Full JSON configuration; the flags below are ignored when given.
        #[arg(long, conflicts_with = "experiment")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "config")]
        experiment: Option<Experiment>,
        #[arg(long)]
        n: Option<usize>,
        /// Shots per setting, or `paper-default`.
        #[arg(long, default_value = "paper-default")]
        shots: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Noise model JSON file, or `none`.
        #[arg(long, default_value = "none")]
        noise: String,
        #[arg(long, value_enum, default_value = "none")]
        mitigation: Mitigation,
        /// Calibration source for mitigation: `exact` or a calibration JSON file.
        #[arg(long, default_value = "exact")]
        calibration: String,
        /// Evaluate only this many uniformly drawn commnet settings.
        #[arg(long)]
        settings_subset: Option<usize>,
        /// Keep exact probabilities instead of sampling shots.
        #[arg(long)]
        exact_probs: bool,
        /// Bootstrap resamples for error bars (0 disables).
        #[arg(long, default_value_t = 1000)]
        bootstrap_resamples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a readout calibration matrix.
    Calibrate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        noise: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 8192)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export derived tables (one row per record) or histogram data.
    Export {
        #[arg(long, required = true, num_args = 1..)]
        record: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_noise(path: &Path) -> Result<NoiseModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading noise model {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing noise model {}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary(record: &ExperimentRecord) -> String {
    match &record.derived.statistics {
        Statistics::Commnet(d) => format!(
            "commnet n={}: p_win = {:.6} ± {:.2e}, certified entangled elements = {}",
            d.n, d.p_win, d.sigma_pwin, d.certified_entangled
        ),
        Statistics::Star(d) => format!(
            "star n={}: S = {:.6}{}, worst-case KL = {:.3e}",
            d.n,
            d.s,
            d.sigma_s.map(|s| format!(" ± {s:.2e}")).unwrap_or_default(),
            d.kl_source_independence
        ),
        Statistics::Bilocal(d) => format!(
            "bilocal: B = {:.6}{} (local bound {:.6})",
            d.statistics.b,
            d.sigma_b_bootstrap.map(|s| format!(" ± {s:.2e}")).unwrap_or_default(),
            d.statistics.classical_bound
        ),
        Statistics::Triangle(d) => format!(
            "triangle: KL vs ideal = {}",
            d.kl_vs_theory.map(|k| format!("{k:.3e}")).unwrap_or_else(|| "n/a".into())
        ),
        Statistics::Calibrate { calibration } => format!("calibration for {} qubits", calibration.n()),
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            experiment,
            n,
            shots,
            seed,
            noise,
            mitigation,
            calibration,
            settings_subset,
            exact_probs,
            bootstrap_resamples,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<ExperimentConfig>(&text)
                        .with_context(|| format!("parsing config {}", path.display()))?
                }
                None => {
                    let Some(experiment) = experiment else { bail!("--experiment is required") };
                    let mut cfg = ExperimentConfig::new(experiment.into(), n, shots.parse::<Shots>()?, seed);
                    if noise != "none" {
                        cfg.noise = Some(read_noise(Path::new(&noise))?);
                    }
                    cfg.mitigation = match mitigation {
                        Mitigation::None => MitigationMethod::None,
                        Mitigation::Pinv => MitigationMethod::Pinv,
                        Mitigation::Lsq => MitigationMethod::Lsq,
                    };
                    cfg.calibration = if calibration == "exact" {
                        CalibrationSource::Exact
                    } else {
                        CalibrationSource::Path(calibration.into())
                    };
                    cfg.settings_subset = settings_subset;
                    cfg.exact_probs = exact_probs;
                    cfg.bootstrap_resamples = bootstrap_resamples;
                    cfg
                }
            };
            if out.is_some() {
                cfg.output = out;
            }
            let record = run(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    record.save(path).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("{}", summary(&record));
                }
                None => println!("{}", record.to_json()?),
            }
        }
        Command::Calibrate { n, noise, mode, shots, seed, out } => {
            let noise = read_noise(&noise)?;
            let mode = match mode {
                Mode::Exact => CalibrationMode::Exact,
                Mode::Sampled => CalibrationMode::Sampled { shots, seed },
            };
            let cal = build_calibration(n, &noise, mode)?;
            fs::write(&out, serde_json::to_string_pretty(&cal)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Export { record, format, out } => {
            let records = record
                .iter()
                .map(|p| ExperimentRecord::load(p).with_context(|| format!("reading record {}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let text = match format {
                Format::Csv => export_csv(&records)?,
                Format::Plotdata => {
                    if records.len() != 1 {
                        bail!("plotdata export takes exactly one record");
                    }
                    export_plotdata(&records[0])?
                }
            };
            write_output(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

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

//! CSV tables and histogram data from experiment records.

use super::record::{outcome_bits, ExperimentRecord, Statistics};
use crate::simcore::{format_outcome, Frequencies};
use crate::{Error, Result};

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Derived-statistics table, one row per record. All records must be of the
/// same experiment kind (e.g. a commnet sweep over `n`).
pub fn export_csv(records: &[ExperimentRecord]) -> Result<String> {
    let first = records.first().ok_or_else(|| Error::invalid("no records to export"))?;
    let kind = first.derived.statistics.kind();
    if let Some(r) = records.iter().find(|r| r.derived.statistics.kind() != kind) {
        return Err(Error::invalid(format!(
            "cannot mix {kind} and {} records in one table",
            r.derived.statistics.kind()
        )));
    }
    let mut w = writer();
    let header: Vec<String> = match &first.derived.statistics {
        Statistics::Commnet(_) => {
            ["n", "p_win", "certified_entangled", "sigma_pwin", "sigma_pwin_bootstrap", "settings_used", "shots"]
                .map(String::from)
                .to_vec()
        }
        Statistics::Star(d) => {
            let mut h: Vec<String> = ["n", "s", "sigma_s", "sigma_s_bootstrap", "kl_source_independence", "shots"]
                .map(String::from)
                .to_vec();
            h.extend((1..=d.i.len()).map(|j| format!("i_{j}")));
            h
        }
        Statistics::Bilocal(_) => ["b", "classical_bound", "sigma_b_bootstrap", "p_b1", "p_b2", "p_b3", "p_b4", "shots"]
            .map(String::from)
            .to_vec(),
        Statistics::Triangle(_) => ["kl_vs_theory", "shots"].map(String::from).to_vec(),
        Statistics::Calibrate { calibration } => {
            let mut h = vec!["row".to_string()];
            h.extend((0..calibration.dim()).map(|j| format!("col_{}", format_outcome(j, calibration.n()))));
            h
        }
    };
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let shots = r.meta.shots_per_setting.to_string();
        let rows: Vec<Vec<String>> = match &r.derived.statistics {
            Statistics::Commnet(d) => vec![vec![
                d.n.to_string(),
                d.p_win.to_string(),
                d.certified_entangled.to_string(),
                d.sigma_pwin.to_string(),
                opt(d.sigma_pwin_bootstrap),
                d.settings_used.to_string(),
                shots,
            ]],
            Statistics::Star(d) => {
                let mut row = vec![
                    d.n.to_string(),
                    d.s.to_string(),
                    opt(d.sigma_s),
                    opt(d.sigma_s_bootstrap),
                    d.kl_source_independence.to_string(),
                    shots,
                ];
                row.extend(d.i.iter().map(|v| v.to_string()));
                vec![row]
            }
            Statistics::Bilocal(d) => {
                let s = &d.statistics;
                let mut row = vec![s.b.to_string(), s.classical_bound.to_string(), opt(d.sigma_b_bootstrap)];
                row.extend(s.p_b.iter().map(|v| v.to_string()));
                row.push(shots);
                vec![row]
            }
            Statistics::Triangle(d) => vec![vec![opt(d.kl_vs_theory), shots]],
            Statistics::Calibrate { calibration } => (0..calibration.dim())
                .map(|i| {
                    let mut row = vec![format_outcome(i, calibration.n())];
                    row.extend((0..calibration.dim()).map(|j| calibration.get(i, j).to_string()));
                    row
                })
                .collect(),
        };
        for row in rows {
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish(w)
}

/// `(setting, outcome, probability)` rows for histogram rendering; every
/// outcome of every setting is listed. Triangle outcomes are additionally
/// labelled `a,b,c ∈ 1..4` in a fourth column.
pub fn export_plotdata(record: &ExperimentRecord) -> Result<String> {
    let bits = outcome_bits(record.config.experiment, record.config.n)?;
    let mut w = writer();
    let triangle = matches!(record.derived.statistics, Statistics::Triangle(_));
    let mut header = vec!["setting", "outcome", "probability"];
    if triangle {
        header.push("labels");
    }
    w.write_record(&header).map_err(csv_err)?;
    if let Statistics::Calibrate { .. } = record.derived.statistics {
        return Err(Error::invalid("calibration records have no histogram data"));
    }
    for s in &record.settings {
        let data = s.data(bits)?;
        let label = s.setting.label();
        for (o, p) in data.to_dense().into_iter().enumerate() {
            let mut row = vec![label.clone(), format_outcome(o, bits), p.to_string()];
            if triangle {
                let (a, b, c) = crate::protocols::decode_triangle_outcome(o);
                row.push(format!("{a}{b}{c}"));
            }
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run, ExperimentConfig, ExperimentKind, Shots};

    #[test]
    fn triangle_histogram() {
        let mut c = ExperimentConfig::new(ExperimentKind::Triangle, None, Shots::Count(1000), 1);
        c.exact_probs = true;
        let out = export_plotdata(&run(&c).unwrap()).unwrap();
        let mut reader = csv::Reader::from_reader(out.as_bytes());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 64);
        let total: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-8);
        assert_eq!(&rows[0][3], "111");
    }

    #[test]
    fn commnet_sweep_table() {
        let records: Vec<_> = (2..=4)
            .map(|n| {
                let mut c = ExperimentConfig::new(ExperimentKind::Commnet, Some(n), Shots::Count(64), 3);
                c.bootstrap_resamples = 0;
                run(&c).unwrap()
            })
            .collect();
        let out = export_csv(&records).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("n,p_win,certified_entangled"));
        assert!(lines[3].starts_with("4,1,16,"));
    }

    #[test]
    fn mixed_kinds_rejected() {
        let mut a = ExperimentConfig::new(ExperimentKind::Triangle, None, Shots::Count(10), 1);
        a.exact_probs = true;
        let mut b = ExperimentConfig::new(ExperimentKind::Bilocal, None, Shots::Count(10), 1);
        b.exact_probs = true;
        assert!(export_csv(&[run(&a).unwrap(), run(&b).unwrap()]).is_err());
        assert!(export_csv(&[]).is_err());
    }
}

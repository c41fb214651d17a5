//! CSV tables and run manifests.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use kerrgate::{EntAxis, EntRow, GateRow};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::job::Job;

const DIMENSIONLESS: &str = "dimensionless";
const TURNS: &str = "radians_over_2pi";
const LABEL: &str = "label";

fn table(header: &[&str], units: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    w.write_record(units)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn gate_table(rows: &[GateRow<f64>]) -> Result<String, CliError> {
    let header = [
        "kappa_ratio",
        "eta_norm",
        "F_G",
        "D_G",
        "F_G_corrected",
        "success_trace",
        "theta_mu_over_2pi",
        "estimator",
    ];
    let mut units = [DIMENSIONLESS; 8];
    units[6] = TURNS;
    units[7] = LABEL;
    let body = rows
        .iter()
        .map(|r| {
            vec![
                num(r.kappa_ratio),
                num(r.eta_norm),
                num(r.fidelity),
                num(r.distance),
                num(r.fidelity_corrected),
                num(r.success_trace),
                num(r.theta_mu / (2.0 * PI)),
                r.estimator.to_string(),
            ]
        })
        .collect();
    table(&header, &units, body)
}

pub fn ent_table(rows: &[EntRow<f64>], kitten: bool) -> Result<String, CliError> {
    let mut header = vec![
        "x_name",
        "x_value",
        "theta_over_2pi",
        "theta_rel_over_2pi",
        "F_ent_paper_literal",
        "F_ent_multimode",
        "p_plus",
        "F_kitten_plus",
    ];
    let mut units = vec![LABEL, DIMENSIONLESS, TURNS, TURNS];
    units.extend([DIMENSIONLESS; 4]);
    if kitten {
        header.extend(["p_minus", "F_kitten_minus"]);
        units.extend([DIMENSIONLESS; 2]);
    }
    let body = rows
        .iter()
        .map(|r| {
            let m = &r.metrics;
            let name = match r.axis {
                EntAxis::KappaRatio => "kappa_ratio",
                EntAxis::EtaNormAlpha => "eta_norm_alpha",
            };
            let mut row = vec![
                name.to_string(),
                num(r.x),
                num(m.theta / (2.0 * PI)),
                num(m.theta_relative / (2.0 * PI)),
                num(m.fidelity_paper_literal),
                num(m.fidelity_multimode),
                num(m.kitten.p_plus),
                opt(m.kitten.fidelity_plus),
            ];
            if kitten {
                row.extend([num(m.kitten.p_minus), opt(m.kitten.fidelity_minus)]);
            }
            row
        })
        .collect();
    table(&header, &units, body)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// All parameters in units of kappa_o, including quadrature settings.
    pub job: Job,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, job: Job, out: &Path) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            job,
            outputs: vec![out.to_path_buf()],
        }
    }

    /// `<out>.manifest.json`.
    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("manifest {}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

//! Fully resolved runs. A [`Job`] is what the manifest records, so running
//! the same job twice must give the same bytes.

use std::f64::consts::PI;

use kerrgate::params::config::LoadedConfig;
use kerrgate::params::{eta_from_ensemble, eta_norm, preset, CLAIMED_ETA_NORM};
use kerrgate::{
    process_metrics, sweep_ent, sweep_gate, DetuningRule, EntAxis, EntConfig, EntRow, GateConfig,
    GateRow, Preset,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{CommonArgs, EntArgs, Figure, GateArgs};
use crate::error::CliError;
use crate::output::{ent_table, gate_table};

const MAX_GRID_POINTS: usize = 1_000_000;
const DEFAULT_KAPPA_RATIO: f64 = 0.99;
const DEFAULT_SIGMA_OMEGA: f64 = 0.2;
const DEFAULT_ETA_NORM: f64 = 2.2;
const DEFAULT_ETA_ALPHA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "eta-alpha")]
    EtaAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, lo, hi, step] = parts[..] else {
            return Err(CliError::Usage(format!("--sweep `{s}`: expected axis:lo:hi:step")));
        };
        let axis = match axis {
            "kappa" => Axis::Kappa,
            "eta-alpha" => Axis::EtaAlpha,
            other => {
                return Err(CliError::Usage(format!(
                    "--sweep axis `{other}`; valid: kappa, eta-alpha"
                )))
            }
        };
        let num = |v: &str, what: &str| -> Result<f64, CliError> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--sweep {what} `{v}` is not a finite number")))
        };
        let g = Grid {
            axis,
            lo: num(lo, "lo")?,
            hi: num(hi, "hi")?,
            step: num(step, "step")?,
        };
        g.points()?;
        Ok(g)
    }

    /// Grid values, rounded to 12 decimals so that `0.5 + k * 0.005` prints cleanly.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step > 0.0) {
            return Err(CliError::Usage("--sweep step must be > 0".into()));
        }
        if self.hi < self.lo {
            return Err(CliError::Usage("--sweep needs lo <= hi".into()));
        }
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() + 1.0;
        if n > MAX_GRID_POINTS as f64 {
            return Err(CliError::Usage(format!("--sweep has {n} points; limit is {MAX_GRID_POINTS}")));
        }
        Ok((0..n as usize)
            .map(|i| ((self.lo + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "job", rename_all = "snake_case")]
pub enum Job {
    Gate {
        config: GateConfig<f64>,
        /// Each value gets its own block of rows.
        eta_norms: Vec<f64>,
        grid: Option<Grid>,
    },
    Entangle {
        config: EntConfig<f64>,
        grid: Option<Grid>,
        kitten: bool,
    },
    Feasibility {
        preset: Preset,
    },
}

/// What a run produces: an optional table and a JSON report for stdout.
pub struct Outcome {
    pub csv: Option<String>,
    pub report: serde_json::Value,
    pub is_table: bool,
}

fn load(common: &CommonArgs) -> Result<LoadedConfig, CliError> {
    match &common.config {
        Some(p) => Ok(LoadedConfig::from_path(p)?),
        None => Ok(LoadedConfig::default()),
    }
}

/// `kappa_ratio` from flags, then the config file, then the default.
/// Intrinsic loss is always `1 - kappa_ratio`.
fn kappa_ratio(common: &CommonArgs, cfg: &LoadedConfig) -> Result<f64, CliError> {
    match (common.kappa_ratio, common.kappa_io_ratio) {
        (Some(k), Some(io)) if (k + io - 1.0).abs() > 1e-9 => Err(CliError::Usage(format!(
            "--kappa-ratio {k} and --kappa-io-ratio {io} must sum to 1 (intrinsic loss is 1 - kappa_ratio)"
        ))),
        (Some(k), _) => Ok(k),
        (None, Some(io)) => Ok(1.0 - io),
        (None, None) => Ok(cfg.cavity.map(|c| c.kappa_eo).unwrap_or(DEFAULT_KAPPA_RATIO)),
    }
}

fn sigma_omega(common: &CommonArgs, cfg: &LoadedConfig) -> f64 {
    common.sigma_omega.or(cfg.sigma_omega).unwrap_or(DEFAULT_SIGMA_OMEGA)
}

fn detuning(cfg: &LoadedConfig) -> DetuningRule<f64> {
    cfg.delta_in.map(DetuningRule::Fixed).unwrap_or(DetuningRule::MinusEta)
}

fn no_kappa_flags(common: &CommonArgs, what: &str) -> Result<(), CliError> {
    if common.kappa_ratio.is_some() || common.kappa_io_ratio.is_some() {
        return Err(CliError::Usage(format!(
            "{what} sweeps kappa_eo/kappa_o; drop --kappa-ratio/--kappa-io-ratio"
        )));
    }
    Ok(())
}

pub fn gate_job(a: &GateArgs) -> Result<Job, CliError> {
    let loaded = load(&a.common)?;
    let grid = a.sweep.as_deref().map(Grid::parse).transpose()?;
    if let Some(g) = grid {
        if g.axis != Axis::Kappa {
            return Err(CliError::Usage("gate can only sweep `kappa`".into()));
        }
        no_kappa_flags(&a.common, "this --sweep")?;
    }
    let eta_norm_value = a
        .eta_norm
        .or(loaded.eta_norm)
        .or(loaded.eta.map(|e| eta_norm(e, 1.0)))
        .unwrap_or(DEFAULT_ETA_NORM);
    let mut config = GateConfig::new(kappa_ratio(&a.common, &loaded)?, eta_norm_value);
    config.sigma_omega = sigma_omega(&a.common, &loaded);
    config.detuning_rule = detuning(&loaded);
    config.correct_backaction = a.correct_backaction;
    if let Some(e) = a.estimator {
        config.estimator = e;
    }
    if grid.is_none() {
        config.validate()?;
    }
    Ok(Job::Gate {
        config,
        eta_norms: vec![eta_norm_value],
        grid,
    })
}

pub fn ent_job(a: &EntArgs) -> Result<Job, CliError> {
    let loaded = load(&a.common)?;
    let grid = a.sweep.as_deref().map(Grid::parse).transpose()?;
    let alpha = a
        .alpha
        .map(|x| Complex64::new(x, 0.0))
        .or(loaded.alpha)
        .unwrap_or(Complex64::new(1.0, 0.0));
    let photons = alpha.norm_sqr();
    let eta_alpha = a
        .eta_alpha
        .or(loaded.eta_norm.map(|x| x * photons))
        .or(loaded.eta.map(|e| 4.0 * e * photons / (2.0 * PI)))
        .unwrap_or(DEFAULT_ETA_ALPHA);
    if let Some(g) = grid {
        if g.axis == Axis::Kappa {
            no_kappa_flags(&a.common, "this --sweep")?;
        } else if a.eta_alpha.is_some() {
            return Err(CliError::Usage("--sweep eta-alpha conflicts with --eta-alpha".into()));
        }
    }
    let mut config = EntConfig::new(kappa_ratio(&a.common, &loaded)?, eta_alpha);
    config.alpha = alpha;
    config.sigma_omega = sigma_omega(&a.common, &loaded);
    config.detuning_rule = detuning(&loaded);
    if let Some(f) = a.formula {
        config.formula = f;
    }
    if grid.is_none() {
        config.validate()?;
    }
    Ok(Job::Entangle {
        config,
        grid,
        kitten: a.kitten,
    })
}

pub fn figure_job(
    figure: Figure,
    common: &CommonArgs,
    estimator: Option<kerrgate::Estimator>,
) -> Result<Job, CliError> {
    let loaded = load(common)?;
    let sigma = sigma_omega(common, &loaded);
    let kappa_grid = Grid {
        axis: Axis::Kappa,
        lo: 0.5,
        hi: 1.0,
        step: 0.005,
    };
    match figure {
        Figure::Fig3 => {
            no_kappa_flags(common, "fig3")?;
            let mut config = GateConfig::new(DEFAULT_KAPPA_RATIO, 2.2);
            config.sigma_omega = sigma;
            if let Some(e) = estimator {
                config.estimator = e;
            }
            Ok(Job::Gate {
                config,
                eta_norms: vec![2.2, 4.2],
                grid: Some(kappa_grid),
            })
        }
        Figure::Fig4a | Figure::Fig4b => {
            if estimator.is_some() {
                return Err(CliError::Usage("--estimator applies to fig3 only".into()));
            }
            let grid = if figure == Figure::Fig4a {
                no_kappa_flags(common, "fig4a")?;
                kappa_grid
            } else {
                Grid {
                    axis: Axis::EtaAlpha,
                    lo: 2.0,
                    hi: 6.0,
                    step: 0.01,
                }
            };
            let mut config = EntConfig::new(kappa_ratio(common, &loaded)?, DEFAULT_ETA_ALPHA);
            config.sigma_omega = sigma;
            Ok(Job::Entangle {
                config,
                grid: Some(grid),
                kitten: false,
            })
        }
    }
}

impl Job {
    pub fn run(&self) -> Result<Outcome, CliError> {
        match self {
            Job::Gate {
                config,
                eta_norms,
                grid,
            } => {
                let points = match grid {
                    Some(g) => g.points()?,
                    None => vec![config.kappa_ratio],
                };
                let mut rows: Vec<GateRow<f64>> = Vec::new();
                for &e in eta_norms {
                    let template = GateConfig {
                        eta_norm: e,
                        ..*config
                    };
                    rows.extend(sweep_gate(&template, &points)?);
                }
                let report = match (grid, rows.as_slice()) {
                    (None, [r]) => gate_report(config, r),
                    _ => json!({ "command": "gate", "rows": rows.len() }),
                };
                Ok(Outcome {
                    csv: Some(gate_table(&rows)?),
                    report,
                    is_table: grid.is_some(),
                })
            }
            Job::Entangle {
                config,
                grid,
                kitten,
            } => {
                let (axis, points) = match grid {
                    Some(g) if g.axis == Axis::Kappa => (EntAxis::KappaRatio, g.points()?),
                    Some(g) => (EntAxis::EtaNormAlpha, g.points()?),
                    None => (EntAxis::KappaRatio, vec![config.kappa_ratio]),
                };
                let rows = sweep_ent(config, axis, &points)?;
                let report = match (grid, rows.as_slice()) {
                    (None, [r]) => ent_report(config, r),
                    _ => json!({ "command": "entangle", "rows": rows.len() }),
                };
                Ok(Outcome {
                    csv: Some(ent_table(&rows, *kitten)?),
                    report,
                    is_table: grid.is_some(),
                })
            }
            Job::Feasibility { preset: p } => Ok(Outcome {
                csv: None,
                report: feasibility(*p)?,
                is_table: false,
            }),
        }
    }
}

fn gate_report(cfg: &GateConfig<f64>, r: &GateRow<f64>) -> serde_json::Value {
    let fidelity = if cfg.correct_backaction {
        r.fidelity_corrected
    } else {
        r.fidelity
    };
    let mut report = json!({
        "command": "gate",
        "kappa_ratio": r.kappa_ratio,
        "eta_norm": r.eta_norm,
        "sigma_omega": cfg.sigma_omega,
        "estimator": r.estimator,
        "correct_backaction": cfg.correct_backaction,
        "F_G": fidelity,
        "D_G": r.distance,
        "F_G_uncorrected": r.fidelity,
        "F_G_corrected": r.fidelity_corrected,
        "success_trace": r.success_trace,
        "theta_mu_over_2pi": r.theta_mu / (2.0 * PI),
    });
    if cfg.correct_backaction {
        // D_G of the corrected process.
        let mut c = *cfg;
        c.kappa_ratio = r.kappa_ratio;
        if let Ok(m) = process_metrics(&c) {
            report["D_G"] = json!(m.distance);
        }
    }
    report
}

fn ent_report(cfg: &EntConfig<f64>, r: &EntRow<f64>) -> serde_json::Value {
    let m = &r.metrics;
    json!({
        "command": "entangle",
        "kappa_ratio": cfg.kappa_ratio,
        "eta_norm_alpha": cfg.eta_norm_alpha,
        "alpha": [cfg.alpha.re, cfg.alpha.im],
        "sigma_omega": cfg.sigma_omega,
        "formula": m.formula,
        "F_ent": m.fidelity,
        "F_ent_paper_literal": m.fidelity_paper_literal,
        "F_ent_multimode": m.fidelity_multimode,
        "theta_over_2pi": m.theta / (2.0 * PI),
        "theta_rel_over_2pi": m.theta_relative / (2.0 * PI),
        "p_plus": m.kitten.p_plus,
        "p_minus": m.kitten.p_minus,
        "F_kitten_plus": m.kitten.fidelity_plus,
        "F_kitten_minus": m.kitten.fidelity_minus,
    })
}

/// Ratio beyond which the literal and claimed interaction strengths are flagged.
pub const DISCREPANCY_FACTOR: f64 = 3.0;

fn feasibility(p: Preset) -> Result<serde_json::Value, CliError> {
    let (cavity, ens) = preset(p)?;
    let eta = eta_from_ensemble(&ens)?;
    let kappa_o = cavity.kappa_o();
    let literal = eta_norm(eta.abs(), kappa_o);
    let ratio = literal / CLAIMED_ETA_NORM;
    let flagged = !(1.0 / DISCREPANCY_FACTOR..=DISCREPANCY_FACTOR).contains(&ratio);
    let kappa_ratio = 0.99;
    let at_claimed = process_metrics(&GateConfig::new(kappa_ratio, CLAIMED_ETA_NORM))?;
    let at_literal = process_metrics(&GateConfig::new(kappa_ratio, literal))?;
    if flagged {
        log::warn!(
            "{p}: literal 4 eta/(2 pi kappa_o) = {literal:.4} differs from the claimed {CLAIMED_ETA_NORM} by a factor {ratio:.3}"
        );
    }
    Ok(json!({
        "command": "feasibility",
        "preset": p,
        "n_atoms": ens.n_atoms,
        "kappa_o_rad_per_s": kappa_o,
        "eta_literal_rad_per_s": eta,
        "eta_norm_literal": literal,
        "eta_norm_claimed": CLAIMED_ETA_NORM,
        "ratio_literal_over_claimed": ratio,
        "discrepancy_flagged": flagged,
        "discrepancy_factor_limit": DISCREPANCY_FACTOR,
        "claimed_F_G": 0.98,
        "kappa_ratio": kappa_ratio,
        "gate_at_claimed": {
            "eta_norm": CLAIMED_ETA_NORM,
            "F_G": at_claimed.fidelity,
            "D_G": at_claimed.distance,
            "theta_mu_over_2pi": at_claimed.theta_mu / (2.0 * PI),
        },
        "gate_at_literal": {
            "eta_norm": literal,
            "F_G": at_literal.fidelity,
            "D_G": at_literal.distance,
            "theta_mu_over_2pi": at_literal.theta_mu / (2.0 * PI),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::parse("kappa:0.5:1.0:0.005").unwrap();
        let p = g.points().unwrap();
        assert_eq!(p.len(), 101);
        assert_eq!(p[0], 0.5);
        assert_eq!(p[100], 1.0);
        assert_eq!(p[86], 0.93);
        assert_eq!(Grid::parse("eta-alpha:2:6:0.01").unwrap().points().unwrap().len(), 401);
    }

    #[test]
    fn grid_errors() {
        for bad in ["kappa:1:0.5:0.1", "kappa:0:1:0", "kappa:0:1", "omega:0:1:0.1", "kappa:a:1:0.1"] {
            assert!(matches!(Grid::parse(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn single_point_grid() {
        let g = Grid::parse("kappa:0.7:0.7:0.1").unwrap();
        assert_eq!(g.points().unwrap(), vec![0.7]);
    }
}

//! TOML run configuration with explicit units on every rate.
//!
//! ```toml
//! [cavity]
//! kappa_o  = { value = 10.0, unit = "MHz" }
//! kappa_eo = { value = 0.99, unit = "kappa_o_units" }
//!
//! [kerr]
//! eta_norm = 2.2
//!
//! [pulse]
//! sigma_t = { value = 5.0, unit = "inverse_kappa_o" }
//! alpha = { re = 1.0, im = 0.0 }
//! ```
//!
//! Rate units: `Hz`, `kHz`, `MHz`, `GHz` (cyclic, multiplied by 2 pi),
//! `rad_per_s`, `kappa_o_units`. Time units for `sigma_t`: `s`, `ms`, `us`,
//! `ns`, `inverse_kappa_o`. A rate given as a bare number is rejected.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use toml::{Table, Value};

use super::{AtomEnsemble, CavityPair, EPSILON_0};
use crate::error::{Error, Result};

/// Parsed configuration. Cavity, pulse and `eta` values are in units of the
/// b-cavity linewidth; the ensemble stays in rad/s.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadedConfig {
    /// Physical b-cavity linewidth, when the file fixes one.
    pub kappa_o_rad_per_s: Option<f64>,
    pub cavity: Option<CavityPair<f64>>,
    pub eta: Option<f64>,
    pub eta_norm: Option<f64>,
    pub sigma_omega: Option<f64>,
    pub alpha: Option<Complex64>,
    pub delta_in: Option<f64>,
    pub ensemble: Option<AtomEnsemble>,
}

impl LoadedConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let root: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        check_keys(&root, "", &["cavity", "kerr", "pulse", "ensemble"])?;

        let mut out = LoadedConfig::default();
        let cavity = section(&root, "cavity")?;
        if let Some(c) = cavity {
            if let Some(v) = c.get("kappa_o") {
                let k = rate_rad(v, "cavity.kappa_o")?;
                match k {
                    Rate::Physical(x) => out.kappa_o_rad_per_s = Some(x),
                    Rate::KappaUnits(x) if (x - 1.0).abs() <= 1e-12 => {}
                    Rate::KappaUnits(x) => {
                        return Err(Error::Config(format!(
                            "cavity.kappa_o in kappa_o_units must be 1, got {x}"
                        )))
                    }
                }
            }
        }
        let kappa_o = out.kappa_o_rad_per_s;

        if let Some(c) = cavity {
            check_keys(
                c,
                "cavity",
                &["kappa_o", "kappa_eo", "kappa_io", "kappa_emu", "kappa_imu", "omega_o", "omega_mu"],
            )?;
            let get = |k: &str| -> Result<Option<f64>> {
                c.get(k)
                    .map(|v| to_kappa_units(v, &format!("cavity.{k}"), kappa_o))
                    .transpose()
            };
            let eo = get("kappa_eo")?;
            let io = get("kappa_io")?;
            let (eo, io) = match (eo, io) {
                (Some(e), Some(i)) => {
                    if ((e + i) - 1.0).abs() > 1e-9 {
                        return Err(Error::Config(format!(
                            "kappa_eo + kappa_io = {} does not equal kappa_o",
                            e + i
                        )));
                    }
                    (e, 1.0 - e)
                }
                (Some(e), None) => (e, 1.0 - e),
                (None, Some(i)) => (1.0 - i, i),
                (None, None) => {
                    return Err(Error::Config("cavity needs kappa_eo or kappa_io".into()))
                }
            };
            let mut cav = CavityPair::new(get("omega_o")?.unwrap_or(0.0), eo, io)?;
            if let Some(x) = get("kappa_emu")? {
                cav.kappa_emu = x;
            }
            if let Some(x) = get("kappa_imu")? {
                cav.kappa_imu = x;
            }
            if let Some(x) = get("omega_mu")? {
                cav.omega_mu = x;
            }
            cav.validate()?;
            out.cavity = Some(cav);
        }

        if let Some(k) = section(&root, "kerr")? {
            check_keys(k, "kerr", &["eta", "eta_norm"])?;
            if let Some(v) = k.get("eta") {
                out.eta = Some(to_kappa_units(v, "kerr.eta", kappa_o)?);
            }
            if let Some(v) = k.get("eta_norm") {
                out.eta_norm = Some(plain(v, "kerr.eta_norm")?);
            }
            if out.eta.is_some() && out.eta_norm.is_some() {
                return Err(Error::Config("give kerr.eta or kerr.eta_norm, not both".into()));
            }
        }

        if let Some(p) = section(&root, "pulse")? {
            check_keys(p, "pulse", &["sigma_omega", "sigma_t", "alpha", "delta_in"])?;
            let sigma_omega = match (p.get("sigma_omega"), p.get("sigma_t")) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "give pulse.sigma_omega or pulse.sigma_t, not both".into(),
                    ))
                }
                (Some(v), None) => Some(to_kappa_units(v, "pulse.sigma_omega", kappa_o)?),
                (None, Some(v)) => Some(1.0 / duration_kappa_units(v, kappa_o)?),
                (None, None) => None,
            };
            if let Some(s) = sigma_omega {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::Config(format!("pulse bandwidth must be > 0, got {s}")));
                }
            }
            out.sigma_omega = sigma_omega;
            if let Some(v) = p.get("delta_in") {
                out.delta_in = Some(to_kappa_units(v, "pulse.delta_in", kappa_o)?);
            }
            if let Some(v) = p.get("alpha") {
                out.alpha = Some(complex(v, "pulse.alpha")?);
            }
        }

        if let Some(e) = section(&root, "ensemble")? {
            out.ensemble = Some(ensemble(e, kappa_o)?);
        }
        Ok(out)
    }
}

enum Rate {
    Physical(f64),
    KappaUnits(f64),
}

fn section<'a>(root: &'a Table, name: &str) -> Result<Option<&'a Table>> {
    match root.get(name) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(Error::Config(format!("`{name}` must be a table"))),
    }
}

fn check_keys(t: &Table, prefix: &str, allowed: &[&str]) -> Result<()> {
    for k in t.keys() {
        if !allowed.contains(&k.as_str()) {
            let full = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
            return Err(Error::Config(format!(
                "unknown key `{full}`; expected one of {}",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn number(v: &Value, field: &str) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::Config(format!("`{field}` must be a number"))),
    }
}

fn plain(v: &Value, field: &str) -> Result<f64> {
    let x = number(v, field)?;
    if !x.is_finite() {
        return Err(Error::Config(format!("`{field}` must be finite")));
    }
    Ok(x)
}

fn with_unit<'a>(v: &'a Value, field: &str) -> Result<(f64, &'a str)> {
    match v {
        Value::Table(t) => {
            check_keys(t, field, &["value", "unit"])?;
            let value = t
                .get("value")
                .ok_or_else(|| Error::Config(format!("`{field}` is missing `value`")))?;
            let unit = match t.get("unit") {
                Some(Value::String(s)) => s.as_str(),
                Some(_) => return Err(Error::Config(format!("`{field}.unit` must be a string"))),
                None => return Err(Error::Config(format!("`{field}` is missing `unit`"))),
            };
            Ok((plain(value, field)?, unit))
        }
        Value::Float(_) | Value::Integer(_) => Err(Error::Config(format!(
            "`{field}` has no unit; write {{ value = ..., unit = \"MHz\" | \"kHz\" | \"rad_per_s\" | \"kappa_o_units\" }}"
        ))),
        _ => Err(Error::Config(format!("`{field}` must be {{ value, unit }}"))),
    }
}

fn rate_rad(v: &Value, field: &str) -> Result<Rate> {
    let (x, unit) = with_unit(v, field)?;
    let cyclic = |scale: f64| Rate::Physical(2.0 * PI * scale * x);
    Ok(match unit {
        "Hz" => cyclic(1.0),
        "kHz" => cyclic(1e3),
        "MHz" => cyclic(1e6),
        "GHz" => cyclic(1e9),
        "rad_per_s" => Rate::Physical(x),
        "kappa_o_units" => Rate::KappaUnits(x),
        other => {
            return Err(Error::Config(format!(
                "`{field}`: unknown rate unit `{other}`"
            )))
        }
    })
}

fn to_kappa_units(v: &Value, field: &str, kappa_o: Option<f64>) -> Result<f64> {
    match rate_rad(v, field)? {
        Rate::KappaUnits(x) => Ok(x),
        Rate::Physical(x) => match kappa_o {
            Some(k) => Ok(x / k),
            None => Err(Error::Config(format!(
                "`{field}` is in physical units but cavity.kappa_o is not set"
            ))),
        },
    }
}

fn to_rad_per_s(v: &Value, field: &str, kappa_o: Option<f64>) -> Result<f64> {
    match rate_rad(v, field)? {
        Rate::Physical(x) => Ok(x),
        Rate::KappaUnits(x) => match kappa_o {
            Some(k) => Ok(x * k),
            None => Err(Error::Config(format!(
                "`{field}` is in kappa_o_units but cavity.kappa_o is not set"
            ))),
        },
    }
}

fn duration_kappa_units(v: &Value, kappa_o: Option<f64>) -> Result<f64> {
    let field = "pulse.sigma_t";
    let (x, unit) = with_unit(v, field)?;
    let seconds = |scale: f64| match kappa_o {
        Some(k) => Ok(x * scale * k),
        None => Err(Error::Config(format!(
            "`{field}` is in seconds but cavity.kappa_o is not set"
        ))),
    };
    let t = match unit {
        "inverse_kappa_o" => Ok(x),
        "s" => seconds(1.0),
        "ms" => seconds(1e-3),
        "us" => seconds(1e-6),
        "ns" => seconds(1e-9),
        "kappa_o_units" => Err(Error::Config(
            "pulse.sigma_t is a duration; `kappa_o_units` is a rate. Use `inverse_kappa_o` (sigma_t = 5 / kappa_o)".into(),
        )),
        other => Err(Error::Config(format!("`{field}`: unknown time unit `{other}`"))),
    }?;
    if !(t > 0.0) {
        return Err(Error::Config(format!("`{field}` must be > 0")));
    }
    Ok(t)
}

fn complex(v: &Value, field: &str) -> Result<Complex64> {
    match v {
        Value::Table(t) => {
            check_keys(t, field, &["re", "im"])?;
            let re = t.get("re").map(|x| plain(x, field)).transpose()?.unwrap_or(0.0);
            let im = t.get("im").map(|x| plain(x, field)).transpose()?.unwrap_or(0.0);
            Ok(Complex64::new(re, im))
        }
        other => Ok(Complex64::new(plain(other, field)?, 0.0)),
    }
}

fn ensemble(t: &Table, kappa_o: Option<f64>) -> Result<AtomEnsemble> {
    const RATES: [&str; 9] = [
        "coupling_o",
        "coupling_mu",
        "control_rabi",
        "detuning_mu",
        "detuning_o",
        "decay_1",
        "branch_decay_21",
        "branch_decay_23",
        "decay_43",
    ];
    const PLAIN: [&str; 6] = [
        "n_atoms",
        "density_per_cm3",
        "volume_cm3",
        "dipole_21_cm",
        "dipole_43_cm",
        "mean_photons_mu",
    ];
    let allowed: Vec<&str> = RATES.iter().chain(PLAIN.iter()).copied().collect();
    check_keys(t, "ensemble", &allowed)?;

    let rate = |k: &str, required: bool| -> Result<f64> {
        match t.get(k) {
            Some(v) => to_rad_per_s(v, &format!("ensemble.{k}"), kappa_o),
            None if required => Err(Error::Config(format!("ensemble.{k} is required"))),
            None => Ok(0.0),
        }
    };
    let opt = |k: &str| -> Result<Option<f64>> {
        t.get(k).map(|v| plain(v, &format!("ensemble.{k}"))).transpose()
    };

    let density = opt("density_per_cm3")?;
    let volume = opt("volume_cm3")?;
    let n_atoms = match (opt("n_atoms")?, density, volume) {
        (Some(n), _, _) => n,
        (None, Some(r), Some(v)) => r * v,
        _ => {
            return Err(Error::Config(
                "ensemble needs n_atoms or density_per_cm3 and volume_cm3".into(),
            ))
        }
    };
    let ens = AtomEnsemble {
        n_atoms,
        density,
        volume,
        coupling_o: rate("coupling_o", true)?,
        coupling_mu: rate("coupling_mu", true)?,
        control_rabi: rate("control_rabi", true)?,
        detuning_mu: rate("detuning_mu", true)?,
        detuning_o: rate("detuning_o", false)?,
        decay_1: rate("decay_1", false)?,
        branch_decay_21: rate("branch_decay_21", false)?,
        branch_decay_23: rate("branch_decay_23", false)?,
        decay_43: rate("decay_43", false)?,
        dipole_21: opt("dipole_21_cm")?,
        dipole_43: opt("dipole_43_cm")?,
        epsilon_0: EPSILON_0,
        mean_photons_mu: opt("mean_photons_mu")?.unwrap_or(0.0),
    };
    ens.validate()?;
    Ok(ens)
}

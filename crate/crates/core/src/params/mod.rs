//! Physical parameters of the two-cavity system and the atomic ensemble that
//! mediates the cross-Kerr coupling.
//!
//! Inside the simulator every frequency and rate is a dimensionless multiple
//! of the b-cavity linewidth `kappa_o`. Physical units (rad/s, SI) only appear
//! in [`AtomEnsemble`], in the presets and in the config loader, which
//! converts at the boundary.

pub mod config;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scattering::Polarization;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Interaction strength the feasibility estimate claims for both presets,
/// expressed as `4 eta / (2 pi kappa_o)`.
pub const CLAIMED_ETA_NORM: f64 = 2.2;

/// Linewidths and resonances of the fast optical b-cavity and the slowly
/// decaying g-cavity.
///
/// Total rates are derived from their parts, so `kappa_o = kappa_eo + kappa_io`
/// holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityPair<T> {
    /// b-cavity resonance offset.
    pub omega_o: T,
    /// b-cavity external (input mirror) coupling.
    pub kappa_eo: T,
    /// b-cavity intrinsic loss.
    pub kappa_io: T,
    /// g-cavity resonance offset.
    pub omega_mu: T,
    pub kappa_emu: T,
    pub kappa_imu: T,
}

impl<T: Real> CavityPair<T> {
    /// b-cavity with the given rates and a g-cavity of total width
    /// `1e-3 * (kappa_eo + kappa_io)` split evenly into external and
    /// intrinsic parts.
    pub fn new(omega_o: T, kappa_eo: T, kappa_io: T) -> Result<Self> {
        let kappa_mu_half = (kappa_eo + kappa_io) * T::lit(5e-4);
        let cav = CavityPair {
            omega_o,
            kappa_eo,
            kappa_io,
            omega_mu: T::zero(),
            kappa_emu: kappa_mu_half,
            kappa_imu: kappa_mu_half,
        };
        cav.validate()?;
        Ok(cav)
    }

    /// Cavity in units of the b-cavity linewidth: `kappa_eo = ratio`,
    /// `kappa_io = 1 - ratio`.
    pub fn normalized(omega_o: T, kappa_ratio: T) -> Result<Self> {
        if !(kappa_ratio > T::zero() && kappa_ratio <= T::one()) {
            return Err(Error::domain(
                "kappa_ratio",
                format!("kappa_eo/kappa_o must lie in (0, 1], got {kappa_ratio}"),
            ));
        }
        Self::new(omega_o, kappa_ratio, T::one() - kappa_ratio)
    }

    #[inline]
    pub fn kappa_o(&self) -> T {
        self.kappa_eo + self.kappa_io
    }

    #[inline]
    pub fn kappa_mu(&self) -> T {
        self.kappa_emu + self.kappa_imu
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("kappa_eo", self.kappa_eo),
            ("kappa_io", self.kappa_io),
            ("kappa_emu", self.kappa_emu),
            ("kappa_imu", self.kappa_imu),
        ];
        for (name, v) in rates {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::domain(name, format!("rate must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("omega_o", self.omega_o), ("omega_mu", self.omega_mu)] {
            if !v.is_finite() {
                return Err(Error::domain(name, "must be finite"));
            }
        }
        if self.kappa_o() <= T::zero() {
            return Err(Error::domain("kappa_o", "kappa_eo and kappa_io cannot both be zero"));
        }
        if self.kappa_mu() > T::lit(0.01) * self.kappa_o() {
            log::warn!(
                "kappa_mu = {} exceeds 1% of kappa_o = {}; the g-cavity photon is no longer stationary on the pulse time scale",
                self.kappa_mu(),
                self.kappa_o()
            );
        }
        Ok(())
    }
}

/// Polarization-dependent photon-photon interaction strengths. Only the
/// right-circular mode couples to the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrCoupling<T> {
    pub eta_plus: T,
}

impl<T: Real> KerrCoupling<T> {
    pub fn new(eta_plus: T) -> Result<Self> {
        if !eta_plus.is_finite() {
            return Err(Error::domain("eta_plus", "must be finite"));
        }
        Ok(KerrCoupling { eta_plus })
    }

    /// Interaction for the left-circular mode, which sees an empty cavity.
    #[inline]
    pub fn eta_minus(&self) -> T {
        T::zero()
    }

    #[inline]
    pub fn eta_for(&self, pol: Polarization) -> T {
        match pol {
            Polarization::L => self.eta_minus(),
            Polarization::R => self.eta_plus,
        }
    }
}

/// `4 eta / (2 pi kappa_o)`, the group used to label interaction strengths.
pub fn eta_norm<T: Real>(eta: T, kappa_o: T) -> T {
    T::lit(4.0) * eta / (T::two() * T::PI() * kappa_o)
}

/// Inverse of [`eta_norm`].
pub fn eta_from_norm<T: Real>(eta_norm: T, kappa_o: T) -> T {
    eta_norm * T::two() * T::PI() * kappa_o / T::lit(4.0)
}

/// N-type ensemble parameters, in physical units (rates in rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomEnsemble {
    /// Number of atoms or NV centres.
    pub n_atoms: f64,
    /// Number density (cm^-3); together with `volume` fixes `n_atoms`.
    pub density: Option<f64>,
    /// Ensemble volume (cm^3).
    pub volume: Option<f64>,
    /// Single-emitter coupling to the b-cavity mode.
    pub coupling_o: f64,
    /// Single-emitter coupling to the g-cavity mode.
    pub coupling_mu: f64,
    /// Rabi frequency of the classical control field.
    pub control_rabi: f64,
    /// Detuning of the g-cavity transition |4> <-> |3>.
    pub detuning_mu: f64,
    /// Detuning of the optical and control transitions. Not used by the
    /// interaction-strength formula.
    pub detuning_o: f64,
    /// Decay of |1> to |3>.
    pub decay_1: f64,
    /// Branching decays of |2> into |1> and |3>. Recorded, not consumed.
    pub branch_decay_21: f64,
    pub branch_decay_23: f64,
    /// Decay of |4> to |3>.
    pub decay_43: f64,
    /// Optical (2-1) and g-cavity (4-3) transition dipoles (C m).
    pub dipole_21: Option<f64>,
    pub dipole_43: Option<f64>,
    pub epsilon_0: f64,
    /// Mean g-cavity photon number in the saturation term.
    pub mean_photons_mu: f64,
}

impl AtomEnsemble {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_atoms.is_finite() && self.n_atoms >= 1.0) {
            return Err(Error::domain("n_atoms", format!("need N_a >= 1, got {}", self.n_atoms)));
        }
        if let (Some(rho), Some(v)) = (self.density, self.volume) {
            let n = rho * v;
            if ((n - self.n_atoms) / self.n_atoms).abs() > 1e-9 {
                return Err(Error::domain(
                    "n_atoms",
                    format!("density * volume = {n} disagrees with n_atoms = {}", self.n_atoms),
                ));
            }
        }
        let rates = [
            ("decay_1", self.decay_1),
            ("branch_decay_21", self.branch_decay_21),
            ("branch_decay_23", self.branch_decay_23),
            ("decay_43", self.decay_43),
            ("control_rabi", self.control_rabi.abs()),
            ("coupling_o", self.coupling_o.abs()),
            ("coupling_mu", self.coupling_mu.abs()),
            ("mean_photons_mu", self.mean_photons_mu),
        ];
        for (name, v) in rates {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("detuning_mu", self.detuning_mu), ("detuning_o", self.detuning_o)] {
            if !v.is_finite() {
                return Err(Error::domain(name, "must be finite"));
            }
        }
        Ok(())
    }

    fn saturation(&self) -> Result<f64> {
        let s = self.control_rabi.powi(2) + self.coupling_mu.powi(2) * self.mean_photons_mu;
        if s == 0.0 {
            return Err(Error::domain(
                "control_rabi",
                "Omega_c^2 + g_mu^2 <n_mu> vanishes",
            ));
        }
        Ok(s)
    }
}

/// Cross-Kerr interaction strength (rad/s) from adiabatic elimination of the
/// ensemble:
///
/// `eta = -2 N g_o^2 g_mu^2 Delta / ([Delta^2 + (Gamma_1 + gamma_3)^2] (Omega_c^2 + g_mu^2 <n_mu>))`
pub fn eta_from_ensemble(ens: &AtomEnsemble) -> Result<f64> {
    ens.validate()?;
    let lorentz = ens.detuning_mu.powi(2) + (ens.decay_1 + ens.decay_43).powi(2);
    if lorentz == 0.0 {
        return Err(Error::domain(
            "detuning_mu",
            "Delta^2 + (Gamma_1 + gamma_3)^2 vanishes",
        ));
    }
    let sat = ens.saturation()?;
    Ok(-2.0 * ens.n_atoms * ens.coupling_o.powi(2) * ens.coupling_mu.powi(2) * ens.detuning_mu
        / (lorentz * sat))
}

/// Third-order cross susceptibility (SI) of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityResult {
    pub chi3_cross: Complex64,
}

/// `chi3 = -2 N d21^2 d43^2 / (hbar^3 eps0 V (Delta - i Gamma_1 - i gamma_3)(Omega_c^2 + g_mu^2 <n_mu>))`
/// with the volume converted from cm^3 to m^3.
pub fn chi3_cross(ens: &AtomEnsemble) -> Result<SusceptibilityResult> {
    ens.validate()?;
    let d21 = positive(ens.dipole_21, "dipole_21")?;
    let d43 = positive(ens.dipole_43, "dipole_43")?;
    let volume_m3 = positive(ens.volume, "volume")? * 1e-6;
    let resonance = Complex64::new(ens.detuning_mu, -(ens.decay_1 + ens.decay_43));
    if resonance.norm_sqr() == 0.0 {
        return Err(Error::domain("detuning_mu", "Delta - i(Gamma_1 + gamma_3) vanishes"));
    }
    let sat = ens.saturation()?;
    let prefactor = -2.0 * ens.n_atoms * d21 * d21 * d43 * d43
        / (HBAR.powi(3) * ens.epsilon_0 * volume_m3);
    let chi3_cross = prefactor / (resonance * sat);
    if !(chi3_cross.re.is_finite() && chi3_cross.im.is_finite()) {
        return Err(Error::domain("chi3_cross", "result is not finite"));
    }
    Ok(SusceptibilityResult { chi3_cross })
}

fn positive(v: Option<f64>, name: &str) -> Result<f64> {
    match v {
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(Error::domain(name, format!("must be > 0, got {x}"))),
        None => Err(Error::domain(name, "required but not set")),
    }
}

/// Named parameter sets for the two physical platforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// NV-centre nanodiamond between a 3D microwave cavity and an optical cavity.
    Nv,
    /// Cold Cs cloud between two optical cavities.
    Cs,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Nv, Preset::Cs];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Nv => "nv",
            Preset::Cs => "cs",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nv" => Ok(Preset::Nv),
            "cs" => Ok(Preset::Cs),
            other => Err(Error::Usage(format!(
                "unknown preset `{other}`; valid presets: nv, cs"
            ))),
        }
    }
}

const TWO_PI: f64 = 2.0 * PI;

/// Cavities (rad/s) and ensemble for a named platform.
///
/// The optical coupling `g_o` is not known numerically; only the ratio
/// `Omega_c / g_o = 10` matters, and with `<n_mu> = 0` it cancels from the
/// interaction strength. `g_o` is therefore stored as 1 rad/s.
pub fn preset(p: Preset) -> Result<(CavityPair<f64>, AtomEnsemble)> {
    let kappa_o = TWO_PI * 10e6;
    let kappa_mu = TWO_PI * 10e3;
    let cavity = CavityPair {
        omega_o: 0.0,
        kappa_eo: 0.99 * kappa_o,
        kappa_io: 0.01 * kappa_o,
        omega_mu: 0.0,
        kappa_emu: 0.5 * kappa_mu,
        kappa_imu: 0.5 * kappa_mu,
    };
    let coupling_o = 1.0;
    let ensemble = match p {
        Preset::Nv => AtomEnsemble {
            n_atoms: 5e18 * 0.7e-6,
            density: Some(5e18),
            volume: Some(0.7e-6),
            coupling_o,
            coupling_mu: TWO_PI * 10.0,
            control_rabi: 10.0 * coupling_o,
            detuning_mu: TWO_PI * 0.1e6,
            detuning_o: 0.0,
            decay_1: TWO_PI * 3e3,
            branch_decay_21: 0.0,
            branch_decay_23: 0.0,
            decay_43: TWO_PI * 3e3,
            dipole_21: None,
            dipole_43: None,
            epsilon_0: EPSILON_0,
            mean_photons_mu: 0.0,
        },
        Preset::Cs => AtomEnsemble {
            n_atoms: 6900.0,
            density: None,
            volume: None,
            coupling_o,
            coupling_mu: TWO_PI * 0.5e6,
            control_rabi: 10.0 * coupling_o,
            detuning_mu: TWO_PI * 50e6,
            detuning_o: 0.0,
            decay_1: 0.0,
            branch_decay_21: 0.0,
            branch_decay_23: 0.0,
            decay_43: TWO_PI * 5e6,
            dipole_21: None,
            dipole_43: None,
            epsilon_0: EPSILON_0,
            mean_photons_mu: 0.0,
        },
    };
    cavity.validate()?;
    ensemble.validate()?;
    Ok((cavity, ensemble))
}

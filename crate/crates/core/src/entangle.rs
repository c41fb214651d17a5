//! Hybrid entanglement between the g-cavity qubit and a reflected coherent
//! pulse, and the kitten states obtained by measuring the g-cavity.
//!
//! Target state: `(|0, -alpha> + |1, alpha>) / sqrt2`. The generated state
//! carries the reflected amplitudes `alpha f(w) conj(r_+(w, n))` and the
//! backaction phase `e^{i theta}` on the `|1>` branch.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::DetuningRule;
use crate::hilbert::{multimode_coherent_overlap, single_mode_overlap};
use crate::params::{CavityPair, KerrCoupling};
use crate::pulse::{DrivePulse, QuadSettings};
use crate::scalar::Real;
use crate::scattering::{backaction_phase, reflection, resonance, BranchLabel, Polarization};

const R0: BranchLabel = BranchLabel::new(0, Polarization::R);
const R1: BranchLabel = BranchLabel::new(1, Polarization::R);

/// Largest tolerated gap between the two fidelity formulas before a warning.
pub const FORMULA_AGREEMENT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// Frequency-by-frequency single-mode overlaps weighted by `|f|^2`.
    PaperLiteral,
    /// Overlaps of the full multimode coherent states.
    MultimodeExact,
}

impl Formula {
    pub const ALL: [Formula; 2] = [Formula::PaperLiteral, Formula::MultimodeExact];

    pub fn name(self) -> &'static str {
        match self {
            Formula::PaperLiteral => "paper_literal",
            Formula::MultimodeExact => "multimode_exact",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            Error::Usage(format!(
                "unknown formula `{s}`; valid: paper_literal, multimode_exact"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntConfig<T> {
    pub alpha: Complex<T>,
    pub kappa_ratio: T,
    /// `4 eta |alpha|^2 / (2 pi kappa_o)`.
    pub eta_norm_alpha: T,
    pub sigma_omega: T,
    pub detuning_rule: DetuningRule<T>,
    pub formula: Formula,
    pub quad: QuadSettings,
}

impl<T: Real> EntConfig<T> {
    pub fn new(kappa_ratio: T, eta_norm_alpha: T) -> Self {
        EntConfig {
            alpha: Complex::new(T::one(), T::zero()),
            kappa_ratio,
            eta_norm_alpha,
            sigma_omega: T::lit(0.2),
            detuning_rule: DetuningRule::MinusEta,
            formula: Formula::PaperLiteral,
            quad: QuadSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_ratio > T::zero() && self.kappa_ratio <= T::one()) {
            return Err(Error::domain(
                "kappa_ratio",
                format!("must lie in (0, 1], got {}", self.kappa_ratio),
            ));
        }
        if !self.eta_norm_alpha.is_finite() {
            return Err(Error::domain("eta_norm_alpha", "must be finite"));
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return Err(Error::domain("alpha", "must be finite"));
        }
        if !(self.sigma_omega > T::zero() && self.sigma_omega.is_finite()) {
            return Err(Error::domain("sigma_omega", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Interaction strength in units of `kappa_o`. For the vacuum input the
    /// group carries no information about `eta`; the `|alpha| = 1` value is used.
    pub fn eta(&self) -> T {
        let n = self.alpha.norm_sqr();
        let n = if n > T::zero() { n } else { T::one() };
        T::PI() * self.eta_norm_alpha / (T::two() * n)
    }

    fn system(&self) -> Result<(CavityPair<T>, DrivePulse<T>, KerrCoupling<T>)> {
        self.validate()?;
        let eta = self.eta();
        Ok((
            CavityPair::normalized(self.detuning_rule.delta_in(eta), self.kappa_ratio)?,
            DrivePulse::new(T::zero(), self.sigma_omega, self.alpha)?,
            KerrCoupling::new(eta)?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KittenProjection<T> {
    pub p_plus: T,
    pub p_minus: T,
    /// `None` when the outcome has zero probability or the target kitten
    /// has zero norm.
    pub fidelity_plus: Option<T>,
    pub fidelity_minus: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntMetrics<T> {
    /// Fidelity under the configured formula.
    pub fidelity: T,
    pub formula: Formula,
    pub fidelity_paper_literal: T,
    pub fidelity_multimode: T,
    /// Backaction phase of the `|1>` branch (radians).
    pub theta: T,
    /// `theta(n=1) - theta(n=0)`, reported for sensitivity only.
    pub theta_relative: T,
    pub kitten: KittenProjection<T>,
}

pub fn entanglement_fidelity<T: Real>(cfg: &EntConfig<T>) -> Result<EntMetrics<T>> {
    let (cav, pulse, kerr) = cfg.system()?;
    let theta = backaction_phase(R1, &pulse, &cav, &kerr, cfg.quad)?;
    let theta0 = backaction_phase(R0, &pulse, &cav, &kerr, cfg.quad)?;
    let phase = Complex::from_polar(T::one(), theta);
    let alpha = cfg.alpha;
    let q = pulse.quadrature(cfg.quad, &[resonance(R0, &cav, &kerr), resonance(R1, &cav, &kerr)])?;

    let r0 = |w: T| reflection(w, R0, &cav, &kerr).conj();
    let r1 = |w: T| reflection(w, R1, &cav, &kerr).conj();

    let literal_sum = pulse.weighted_integral(&q, |w| {
        single_mode_overlap(-alpha, r0(w) * alpha)
            + phase * single_mode_overlap(alpha, r1(w) * alpha)
    })?;
    let fidelity_paper_literal = clamp01(literal_sum.norm_sqr() * T::lit(0.25));

    // Multimode amplitudes: +-alpha f(w) for the targets, alpha f(w) conj(r) for the outputs.
    let f = |w: T| pulse.spectrum(w);
    let plus = |w: T| alpha * f(w);
    let minus = |w: T| -alpha * f(w);
    let out0 = |w: T| alpha * f(w) * r0(w);
    let out1 = |w: T| alpha * f(w) * r1(w);

    let m_minus_0 = multimode_coherent_overlap(minus, out0, &q)?;
    let m_plus_1 = multimode_coherent_overlap(plus, out1, &q)?;
    let m_minus_1 = multimode_coherent_overlap(minus, out1, &q)?;
    let m_plus_0 = multimode_coherent_overlap(plus, out0, &q)?;
    let m_01 = multimode_coherent_overlap(out0, out1, &q)?;
    let fidelity_multimode = clamp01((m_minus_0 + phase * m_plus_1).norm_sqr() * T::lit(0.25));

    // Measuring |+-> = (|0> +- e^{i theta}|1>)/sqrt2 leaves (|out0> +- |out1>)/2.
    let overlap_branches = (phase * m_01 * phase.conj()).re;
    let p_plus = (T::one() + overlap_branches) * T::half();
    let p_minus = (T::one() - overlap_branches) * T::half();
    let cat = single_mode_overlap(-alpha, alpha).re;
    let kitten = |sign: T| -> Option<T> {
        let target_norm = T::two() + T::two() * sign * cat;
        let out_norm = T::two() + T::two() * sign * m_01.re;
        let floor = T::tol(1e-14);
        if target_norm <= floor || out_norm <= floor {
            return None;
        }
        let amp = m_minus_0 + m_minus_1 * sign + m_plus_0 * sign + m_plus_1;
        Some(clamp01(amp.norm_sqr() / (target_norm * out_norm)))
    };
    let kitten = KittenProjection {
        p_plus,
        p_minus,
        fidelity_plus: kitten(T::one()),
        fidelity_minus: kitten(-T::one()),
    };

    let gap = (fidelity_paper_literal - fidelity_multimode).abs();
    if gap > T::lit(FORMULA_AGREEMENT) {
        log::warn!(
            "paper_literal ({fidelity_paper_literal}) and multimode_exact ({fidelity_multimode}) differ by {gap} \
             at kappa_ratio={}, eta_norm_alpha={}, sigma_omega={}, |alpha|={}",
            cfg.kappa_ratio,
            cfg.eta_norm_alpha,
            cfg.sigma_omega,
            cfg.alpha.norm()
        );
    }

    Ok(EntMetrics {
        fidelity: match cfg.formula {
            Formula::PaperLiteral => fidelity_paper_literal,
            Formula::MultimodeExact => fidelity_multimode,
        },
        formula: cfg.formula,
        fidelity_paper_literal,
        fidelity_multimode,
        theta,
        theta_relative: theta - theta0,
        kitten,
    })
}

pub fn kitten_projection<T: Real>(cfg: &EntConfig<T>) -> Result<KittenProjection<T>> {
    Ok(entanglement_fidelity(cfg)?.kitten)
}

fn clamp01<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// Swept parameter of a Fig. 4 style table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntAxis {
    KappaRatio,
    EtaNormAlpha,
}

impl EntAxis {
    pub fn name(self) -> &'static str {
        match self {
            EntAxis::KappaRatio => "kappa_ratio",
            EntAxis::EtaNormAlpha => "eta_norm_alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntRow<T> {
    pub axis: EntAxis,
    pub x: T,
    pub metrics: EntMetrics<T>,
}

pub fn sweep_ent<T: Real>(template: &EntConfig<T>, axis: EntAxis, grid: &[T]) -> Result<Vec<EntRow<T>>> {
    grid.par_iter()
        .map(|&x| {
            let mut cfg = *template;
            match axis {
                EntAxis::KappaRatio => cfg.kappa_ratio = x,
                EntAxis::EtaNormAlpha => cfg.eta_norm_alpha = x,
            }
            Ok(EntRow {
                axis,
                x,
                metrics: entanglement_fidelity(&cfg)?,
            })
        })
        .collect()
}

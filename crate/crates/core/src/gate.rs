//! Controlled-Z gate between the g-cavity photon number and the polarization
//! of a reflected single-photon wavepacket.
//!
//! Branches are always ordered `(0,L), (0,R), (1,L), (1,R)`. The ideal gate
//! is `diag(-1, -1, -1, +1)`; the simulated gate multiplies each branch by
//! its spectral overlap `O_j` and the `(1,R)` branch additionally by the
//! backaction phase `e^{i theta_mu}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{trace_distance, uhlmann_fidelity, CMatrix, DensityMatrix};
use crate::params::{eta_from_norm, CavityPair, KerrCoupling};
use crate::pulse::{DrivePulse, QuadSettings};
use crate::scalar::Real;
use crate::scattering::{scatter_set, BranchLabel, Polarization, ScatterSet};

pub const CANONICAL_BRANCHES: [BranchLabel; 4] = [
    BranchLabel::new(0, Polarization::L),
    BranchLabel::new(0, Polarization::R),
    BranchLabel::new(1, Polarization::L),
    BranchLabel::new(1, Polarization::R),
];

/// Index of the phase-carrying `(1,R)` branch.
const CONTROLLED: usize = 3;

/// How the process is compared with the ideal gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Pure Choi state built from the in-mode amplitudes, renormalized.
    PureChoi,
    /// Choi state plus one orthogonal leak dimension per branch carrying
    /// the out-of-mode weight `W_j - |O_j|^2`.
    LeakageResolved,
    /// Mean output-state fidelity and distance over the 16 product inputs of
    /// the tomography basis.
    AvgOutput,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [
        Estimator::PureChoi,
        Estimator::LeakageResolved,
        Estimator::AvgOutput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::PureChoi => "pure_choi",
            Estimator::LeakageResolved => "leakage_resolved",
            Estimator::AvgOutput => "avg_output",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown estimator `{s}`; valid: pure_choi, leakage_resolved, avg_output"
                ))
            })
    }
}

/// Where the carrier sits relative to the bare b-cavity resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningRule<T> {
    /// `omega_o - omega_in = -eta`: the `(1,R)` branch is resonant.
    MinusEta,
    /// Explicit `omega_o - omega_in` in units of `kappa_o`.
    Fixed(T),
}

impl<T: Real> DetuningRule<T> {
    pub fn delta_in(&self, eta: T) -> T {
        match *self {
            DetuningRule::MinusEta => -eta,
            DetuningRule::Fixed(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateConfig<T> {
    /// `kappa_eo / kappa_o`; intrinsic loss is `1 - kappa_ratio`.
    pub kappa_ratio: T,
    /// `4 eta / (2 pi kappa_o)`.
    pub eta_norm: T,
    pub sigma_omega: T,
    pub detuning_rule: DetuningRule<T>,
    pub correct_backaction: bool,
    pub estimator: Estimator,
    pub quad: QuadSettings,
}

impl<T: Real> GateConfig<T> {
    pub fn new(kappa_ratio: T, eta_norm: T) -> Self {
        GateConfig {
            kappa_ratio,
            eta_norm,
            sigma_omega: T::lit(0.2),
            detuning_rule: DetuningRule::MinusEta,
            correct_backaction: false,
            estimator: Estimator::PureChoi,
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
        if !self.eta_norm.is_finite() {
            return Err(Error::domain("eta_norm", "must be finite"));
        }
        if !(self.sigma_omega > T::zero() && self.sigma_omega.is_finite()) {
            return Err(Error::domain("sigma_omega", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Interaction strength in units of `kappa_o`.
    pub fn eta(&self) -> T {
        eta_from_norm(self.eta_norm, T::one())
    }

    /// Cavity, single-photon pulse and coupling in units of `kappa_o`, with
    /// the carrier at zero.
    pub fn system(&self) -> Result<GateSystem<T>> {
        self.validate()?;
        let eta = self.eta();
        Ok(GateSystem {
            cavity: CavityPair::normalized(self.detuning_rule.delta_in(eta), self.kappa_ratio)?,
            pulse: DrivePulse::new(T::zero(), self.sigma_omega, Complex::new(T::one(), T::zero()))?,
            kerr: KerrCoupling::new(eta)?,
        })
    }
}

/// Fully resolved physical configuration, in any consistent frequency unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSystem<T> {
    pub cavity: CavityPair<T>,
    pub pulse: DrivePulse<T>,
    pub kerr: KerrCoupling<T>,
}

impl<T: Real> GateSystem<T> {
    pub fn scatter(&self, quad: QuadSettings) -> Result<ScatterSet<T>> {
        scatter_set(&CANONICAL_BRANCHES, &self.pulse, &self.cavity, &self.kerr, quad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics<T> {
    pub fidelity: T,
    pub distance: T,
    /// `1/4 sum_j W_j`, the reflected probability averaged over branches.
    pub success_trace: T,
    /// Backaction phase of the `(1,R)` branch.
    pub theta_mu: T,
    pub estimator: Estimator,
}

/// Signs of the ideal gate over the canonical branches.
pub fn target_unitary<T: Real>() -> [T; 4] {
    [-T::one(), -T::one(), -T::one(), T::one()]
}

/// Output amplitude of each canonical branch in the input wavepacket mode.
pub fn scatter_map<T: Real>(correct_backaction: bool, s: &ScatterSet<T>) -> Result<[Complex<T>; 4]> {
    if s.branches != CANONICAL_BRANCHES {
        return Err(Error::domain(
            "scatter_set",
            "branches must be (0,L), (0,R), (1,L), (1,R) in that order",
        ));
    }
    let mut v = [s.overlap[0], s.overlap[1], s.overlap[2], s.overlap[3]];
    if !correct_backaction {
        v[CONTROLLED] = v[CONTROLLED] * Complex::from_polar(T::one(), s.theta[CONTROLLED]);
    }
    Ok(v)
}

pub fn process_metrics<T: Real>(cfg: &GateConfig<T>) -> Result<GateMetrics<T>> {
    let s = cfg.system()?.scatter(cfg.quad)?;
    evaluate(&s, cfg.estimator, cfg.correct_backaction)
}

/// Gate metrics for an already computed scatter set.
pub fn evaluate<T: Real>(
    s: &ScatterSet<T>,
    estimator: Estimator,
    correct_backaction: bool,
) -> Result<GateMetrics<T>> {
    let v = scatter_map(correct_backaction, s)?;
    let u = target_unitary::<T>();
    let leak: Vec<T> = (0..4)
        .map(|j| (s.weight[j] - s.overlap[j].norm_sqr()).max(T::zero()))
        .collect();

    let (fidelity, distance) = match estimator {
        Estimator::PureChoi => {
            let target = DensityMatrix::from_pure(&choi_vector(&u.map(real)))?;
            let actual = DensityMatrix::from_pure(&choi_vector(&v))?.normalized();
            (uhlmann_fidelity(&target, &actual)?, trace_distance(&target, &actual)?)
        }
        Estimator::LeakageResolved => {
            let dim = 16 + 4;
            let target = DensityMatrix::from_pure(&choi_vector(&u.map(real)))?.embed(dim)?;
            let mut m = CMatrix::outer(&choi_vector(&v)).embed(dim);
            let quarter = T::lit(0.25);
            for (j, &l) in leak.iter().enumerate() {
                m[(16 + j, 16 + j)] = Complex::new(quarter * l, T::zero());
            }
            let actual = DensityMatrix::new(m)?.normalized();
            (uhlmann_fidelity(&target, &actual)?, trace_distance(&target, &actual)?)
        }
        Estimator::AvgOutput => average_output(&u, &v, &leak)?,
    };

    Ok(GateMetrics {
        fidelity,
        distance,
        success_trace: s.weight.iter().copied().sum::<T>() * T::lit(0.25),
        theta_mu: s.theta[CONTROLLED],
        estimator,
    })
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `1/2 sum_j a_j |j>|j>` on the 4 x 4 system-reference space.
fn choi_vector<T: Real>(a: &[Complex<T>; 4]) -> Vec<Complex<T>> {
    let mut out = vec![real(T::zero()); 16];
    for j in 0..4 {
        out[j * 4 + j] = a[j] * T::half();
    }
    out
}

/// The four single-qubit tomography states `|0>, |1>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2`.
fn tomography_states<T: Real>() -> [[Complex<T>; 2]; 4] {
    let h = T::FRAC_1_SQRT_2();
    let (zero, one) = (real(T::zero()), real(T::one()));
    [
        [one, zero],
        [zero, one],
        [real(h), real(h)],
        [real(h), Complex::new(T::zero(), h)],
    ]
}

fn average_output<T: Real>(u: &[T; 4], v: &[Complex<T>; 4], leak: &[T]) -> Result<(T, T)> {
    let basis = tomography_states::<T>();
    let (mut f_sum, mut d_sum) = (T::zero(), T::zero());
    for g in &basis {
        for p in &basis {
            // Branch j = 2 n + pol, matching CANONICAL_BRANCHES.
            let psi: Vec<Complex<T>> = (0..4).map(|j| g[j / 2] * p[j % 2]).collect();
            let mut target = vec![real(T::zero()); 8];
            let mut kept = vec![real(T::zero()); 8];
            for j in 0..4 {
                target[j] = psi[j] * u[j];
                kept[j] = psi[j] * v[j];
            }
            let mut m = CMatrix::outer(&kept);
            for j in 0..4 {
                m[(4 + j, 4 + j)] = real(leak[j] * psi[j].norm_sqr());
            }
            let actual = DensityMatrix::new(m)?.normalized();
            let target = DensityMatrix::from_pure(&target)?;
            f_sum = f_sum + uhlmann_fidelity(&target, &actual)?;
            d_sum = d_sum + trace_distance(&target, &actual)?;
        }
    }
    let n = T::lit(16.0);
    Ok((f_sum / n, d_sum / n))
}

/// One row of a Fig. 3 style sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateRow<T> {
    pub kappa_ratio: T,
    pub eta_norm: T,
    pub fidelity: T,
    pub distance: T,
    pub fidelity_corrected: T,
    pub success_trace: T,
    pub theta_mu: T,
    pub estimator: Estimator,
}

/// Evaluates the template at each `kappa_ratio`. Points run in parallel;
/// rows come back in grid order.
pub fn sweep_gate<T: Real>(template: &GateConfig<T>, kappa_grid: &[T]) -> Result<Vec<GateRow<T>>> {
    kappa_grid
        .par_iter()
        .map(|&kappa_ratio| {
            let cfg = GateConfig {
                kappa_ratio,
                ..*template
            };
            let s = cfg.system()?.scatter(cfg.quad)?;
            let raw = evaluate(&s, cfg.estimator, false)?;
            let corrected = evaluate(&s, cfg.estimator, true)?;
            Ok(GateRow {
                kappa_ratio,
                eta_norm: cfg.eta_norm,
                fidelity: raw.fidelity,
                distance: raw.distance,
                fidelity_corrected: corrected.fidelity,
                success_trace: raw.success_trace,
                theta_mu: raw.theta_mu,
                estimator: cfg.estimator,
            })
        })
        .collect()
}

//! Frequency-resolved reflection off the b-cavity, the intracavity response
//! that drives the g-cavity backaction phase, and the spectral integrals over
//! the pulse that every gate and entanglement figure is built from.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::CMatrix;
use crate::params::{CavityPair, KerrCoupling};
use crate::pulse::{DrivePulse, QuadSettings, Quadrature};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    /// Left circular: uncoupled, reflects off an empty cavity.
    L,
    /// Right circular: shifted by `eta * n_mu`.
    R,
}

/// One term of the input superposition: g-cavity photon number and flying
/// photon polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchLabel {
    pub n_mu: u32,
    pub pol: Polarization,
}

impl BranchLabel {
    pub const fn new(n_mu: u32, pol: Polarization) -> Self {
        BranchLabel { n_mu, pol }
    }
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:?})", self.n_mu, self.pol)
    }
}

/// `omega_o - omega + eta_pol * n_mu`.
#[inline]
fn detuning<T: Real>(omega: T, b: BranchLabel, cav: &CavityPair<T>, k: &KerrCoupling<T>) -> T {
    cav.omega_o - omega + k.eta_for(b.pol) * T::lit(b.n_mu as f64)
}

/// Frequency at which branch `b` is resonant with the shifted b-cavity.
pub fn resonance<T: Real>(b: BranchLabel, cav: &CavityPair<T>, k: &KerrCoupling<T>) -> T {
    cav.omega_o + k.eta_for(b.pol) * T::lit(b.n_mu as f64)
}

/// Reflection amplitude
/// `r = [-i d + kappa_eo - kappa_io] / [i d + kappa_eo + kappa_io]`
/// with `d = omega_o - omega + eta_pol * n_mu`.
pub fn reflection<T: Real>(
    omega: T,
    b: BranchLabel,
    cav: &CavityPair<T>,
    k: &KerrCoupling<T>,
) -> Complex<T> {
    let d = detuning(omega, b, cav, k);
    let num = Complex::new(cav.kappa_eo - cav.kappa_io, -d);
    let den = Complex::new(cav.kappa_eo + cav.kappa_io, d);
    num / den
}

/// Intracavity amplitude per unit input, `2 kappa_eo / (i d + kappa_o)`.
pub fn intracavity_response<T: Real>(
    omega: T,
    b: BranchLabel,
    cav: &CavityPair<T>,
    k: &KerrCoupling<T>,
) -> Complex<T> {
    let d = detuning(omega, b, cav, k);
    Complex::new(T::two() * cav.kappa_eo, T::zero()) / Complex::new(cav.kappa_o(), d)
}

/// Phase the scattered pulse imprints on the g-cavity through the cross-Kerr
/// term:
///
/// `theta = (eta_pol |alpha|^2 / kappa_o) int |f(w)|^2 |2 kappa_eo / (i d + kappa_o)|^2 dw`.
///
/// In the narrowband, resonant limit this tends to `4 eta |alpha|^2 kappa_eo^2 / kappa_o^3`.
pub fn backaction_phase<T: Real>(
    b: BranchLabel,
    p: &DrivePulse<T>,
    cav: &CavityPair<T>,
    k: &KerrCoupling<T>,
    settings: QuadSettings,
) -> Result<T> {
    let q = p.quadrature(settings, &[resonance(b, cav, k)])?;
    backaction_phase_on(&q, b, p, cav, k)
}

fn backaction_phase_on<T: Real>(
    q: &Quadrature<T>,
    b: BranchLabel,
    p: &DrivePulse<T>,
    cav: &CavityPair<T>,
    k: &KerrCoupling<T>,
) -> Result<T> {
    let eta = k.eta_for(b.pol);
    let intensity = p.mean_photons();
    if eta == T::zero() || intensity == T::zero() {
        return Ok(T::zero());
    }
    let weight = p
        .weighted_integral(q, |w| {
            Complex::new(intracavity_response(w, b, cav, k).norm_sqr(), T::zero())
        })?
        .re;
    Ok(eta * intensity / cav.kappa_o() * weight)
}

/// Spectral integrals over the pulse for a set of branches.
///
/// With `r_j(w)` the reflection of branch `j`:
/// - `overlap[j] = int |f|^2 conj(r_j) dw` (amplitude left in the input mode),
/// - `weight[j] = int |f|^2 |r_j|^2 dw` (reflected probability),
/// - `gram[(j,k)] = delta(pol_j, pol_k) int |f|^2 conj(r_j) r_k dw`,
/// - `theta[j]` the backaction phase of the branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterSet<T> {
    pub branches: Vec<BranchLabel>,
    pub overlap: Vec<Complex<T>>,
    pub weight: Vec<T>,
    pub gram: CMatrix<T>,
    pub theta: Vec<T>,
}

impl<T: Real> ScatterSet<T> {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn index_of(&self, b: BranchLabel) -> Option<usize> {
        self.branches.iter().position(|&x| x == b)
    }
}

pub fn scatter_set<T: Real>(
    branches: &[BranchLabel],
    p: &DrivePulse<T>,
    cav: &CavityPair<T>,
    k: &KerrCoupling<T>,
    settings: QuadSettings,
) -> Result<ScatterSet<T>> {
    for (i, a) in branches.iter().enumerate() {
        if branches[..i].contains(a) {
            return Err(Error::domain("branches", format!("duplicate branch {a}")));
        }
    }
    let centers: Vec<T> = branches.iter().map(|&b| resonance(b, cav, k)).collect();
    let q = p.quadrature(settings, &centers)?;
    let n = branches.len();

    let mut overlap = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for &b in branches {
        overlap.push(p.weighted_integral(&q, |w| reflection(w, b, cav, k).conj())?);
        weight.push(
            p.weighted_integral(&q, |w| Complex::new(reflection(w, b, cav, k).norm_sqr(), T::zero()))?
                .re,
        );
        theta.push(backaction_phase_on(&q, b, p, cav, k)?);
    }

    let mut gram = CMatrix::zeros(n);
    for j in 0..n {
        gram[(j, j)] = Complex::new(weight[j], T::zero());
        for l in (j + 1)..n {
            let (bj, bl) = (branches[j], branches[l]);
            let g = if bj.pol == bl.pol {
                p.weighted_integral(&q, |w| reflection(w, bj, cav, k).conj() * reflection(w, bl, cav, k))?
            } else {
                Complex::new(T::zero(), T::zero())
            };
            gram[(j, l)] = g;
            gram[(l, j)] = g.conj();
        }
    }

    Ok(ScatterSet {
        branches: branches.to_vec(),
        overlap,
        weight,
        gram,
        theta,
    })
}

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::Quadrature;
use crate::scalar::Real;

/// Which field mode a coherent amplitude refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeLabel<T> {
    /// Monochromatic mode at this frequency.
    Frequency(T),
    /// The pulse wavepacket as a single mode.
    Wavepacket,
}

/// Displaced vacuum `D(alpha)|0>` in a given mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude<T> {
    pub value: Complex<T>,
    pub mode: ModeLabel<T>,
}

impl<T: Real> CoherentAmplitude<T> {
    pub fn new(value: Complex<T>, mode: ModeLabel<T>) -> Self {
        CoherentAmplitude { value, mode }
    }

    pub fn at_frequency(value: Complex<T>, omega: T) -> Self {
        Self::new(value, ModeLabel::Frequency(omega))
    }
}

/// `<beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta) gamma)`.
pub fn coherent_overlap<T: Real>(
    beta: &CoherentAmplitude<T>,
    gamma: &CoherentAmplitude<T>,
) -> Result<Complex<T>> {
    if beta.mode != gamma.mode {
        return Err(Error::domain(
            "mode",
            format!("overlap between different modes {:?} and {:?}", beta.mode, gamma.mode),
        ));
    }
    Ok(single_mode_overlap(beta.value, gamma.value))
}

#[inline]
pub(crate) fn single_mode_overlap<T: Real>(b: Complex<T>, g: Complex<T>) -> Complex<T> {
    let half = T::half();
    (Complex::new(-half * (b.norm_sqr() + g.norm_sqr()), T::zero()) + b.conj() * g).exp()
}

/// Overlap of two multimode coherent states with spectral amplitudes `u(w)`
/// and `v(w)`:
/// `exp(-1/2 int|u|^2 - 1/2 int|v|^2 + int conj(u) v)`.
pub fn multimode_coherent_overlap<T, U, V>(u: U, v: V, q: &Quadrature<T>) -> Result<Complex<T>>
where
    T: Real,
    U: Fn(T) -> Complex<T>,
    V: Fn(T) -> Complex<T>,
{
    let half = T::half();
    let exponent = q.integrate(|w| {
        let (a, b) = (u(w), v(w));
        Complex::new(-half * (a.norm_sqr() + b.norm_sqr()), T::zero()) + a.conj() * b
    })?;
    Ok(exponent.exp())
}

//! Gaussian drive wavepacket and the frequency grid shared by all spectral
//! integrals.

mod quadrature;

pub use quadrature::{QuadSettings, Quadrature};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Half-width of the integration window in units of `sigma_omega`.
pub const WINDOW_SIGMAS: f64 = 8.0;

/// Gaussian input pulse on the b-cavity mirror.
///
/// The spectral amplitude is
/// `f(w) = exp(-(w - omega_in)^2 / (2 sigma_omega^2)) / (pi^(1/4) sqrt(sigma_omega))`,
/// normalized so that `int |f|^2 dw = 1`, with duration `sigma_t = 1 / sigma_omega`.
/// The g-cavity is never driven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivePulse<T> {
    pub omega_in: T,
    pub sigma_omega: T,
    /// Coherent amplitude; `|alpha|^2` is the mean photon number.
    pub alpha: Complex<T>,
}

impl<T: Real> DrivePulse<T> {
    pub fn new(omega_in: T, sigma_omega: T, alpha: Complex<T>) -> Result<Self> {
        if !(sigma_omega > T::zero() && sigma_omega.is_finite()) {
            return Err(Error::domain(
                "sigma_omega",
                format!("bandwidth must be finite and > 0, got {sigma_omega}"),
            ));
        }
        if !(omega_in.is_finite() && alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::domain("pulse", "carrier and amplitude must be finite"));
        }
        Ok(DrivePulse {
            omega_in,
            sigma_omega,
            alpha,
        })
    }

    /// Pulse of duration `sigma_t` (in units of `1/kappa_o`).
    pub fn from_duration(omega_in: T, sigma_t: T, alpha: Complex<T>) -> Result<Self> {
        if !(sigma_t > T::zero() && sigma_t.is_finite()) {
            return Err(Error::domain("sigma_t", format!("duration must be > 0, got {sigma_t}")));
        }
        Self::new(omega_in, T::one() / sigma_t, alpha)
    }

    #[inline]
    pub fn sigma_t(&self) -> T {
        T::one() / self.sigma_omega
    }

    /// External drive on the g-cavity; always off.
    #[inline]
    pub fn beta_in(&self) -> Complex<T> {
        Complex::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn mean_photons(&self) -> T {
        self.alpha.norm_sqr()
    }

    /// `omega_o - omega_in` for a cavity resonance `omega_o`.
    #[inline]
    pub fn detuning_from(&self, omega_o: T) -> T {
        omega_o - self.omega_in
    }

    /// Real spectral amplitude `f(w)`.
    pub fn spectrum(&self, omega: T) -> T {
        let x = (omega - self.omega_in) / self.sigma_omega;
        (-x * x * T::half()).exp() / (T::PI().sqrt().sqrt() * self.sigma_omega.sqrt())
    }

    /// `|f(w)|^2`.
    pub fn spectral_density(&self, omega: T) -> T {
        let x = (omega - self.omega_in) / self.sigma_omega;
        (-x * x).exp() / (T::PI().sqrt() * self.sigma_omega)
    }

    /// Time-domain envelope `s(t) = exp(-t^2 / (2 sigma_t^2)) / sqrt(sqrt(pi) sigma_t)`.
    pub fn time_profile(&self, t: T) -> T {
        let st = self.sigma_t();
        let x = t / st;
        (-x * x * T::half()).exp() / (T::PI().sqrt() * st).sqrt()
    }

    /// Integration grid over `omega_in +/- 8 sigma_omega`, widened to reach
    /// every Lorentzian centre in `centers` and split at each of them.
    pub fn quadrature(&self, settings: QuadSettings, centers: &[T]) -> Result<Quadrature<T>> {
        let half = self.sigma_omega * T::lit(WINDOW_SIGMAS);
        let mut lo = self.omega_in - half;
        let mut hi = self.omega_in + half;
        for &c in centers {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        let breaks = centers
            .iter()
            .copied()
            .chain([self.omega_in - half, self.omega_in, self.omega_in + half]);
        Quadrature::with_breakpoints(lo, hi, breaks, settings)
    }

    /// `int |f(w)|^2 g(w) dw` over [`Self::quadrature`].
    pub fn weighted_integral<F>(&self, q: &Quadrature<T>, g: F) -> Result<Complex<T>>
    where
        F: Fn(T) -> Complex<T>,
    {
        q.integrate(|w| g(w) * self.spectral_density(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse(sigma: f64) -> DrivePulse<f64> {
        DrivePulse::new(0.3, sigma, Complex::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn duration_five_over_kappa_gives_bandwidth_fifth() {
        let p: DrivePulse<f64> = DrivePulse::from_duration(0.0, 5.0, Complex::new(1.0, 0.0)).unwrap();
        assert!((p.sigma_omega - 0.2).abs() < 1e-15);
        assert!((p.sigma_omega * p.sigma_t() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn peak_density() {
        let p = pulse(0.2);
        let expected = 1.0 / (std::f64::consts::PI.sqrt() * 0.2);
        assert!((p.spectral_density(0.3) - expected).abs() < 1e-13);
        assert!((p.spectrum(0.3).powi(2) - expected).abs() < 1e-13);
    }

    #[test]
    fn invalid_pulses() {
        assert!(DrivePulse::new(0.0, 0.0, Complex::new(1.0, 0.0)).is_err());
        assert!(DrivePulse::new(0.0, -1.0, Complex::new(1.0, 0.0)).is_err());
        assert!(DrivePulse::from_duration(0.0, 0.0, Complex::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn window_reaches_far_centres() {
        let p = pulse(0.2);
        let q = p.quadrature(QuadSettings::default(), &[-7.0, 0.3]).unwrap();
        assert_eq!(q.lower(), -7.0);
        assert!((q.upper() - (0.3 + 1.6)).abs() < 1e-15);
        assert!(q.edges().contains(&0.3));
    }

    #[test]
    fn drive_on_g_cavity_is_off() {
        assert_eq!(pulse(0.2).beta_in(), Complex::new(0.0, 0.0));
    }
}

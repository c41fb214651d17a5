//! Independent oracles for values the library computes by other means.

use kerrgate::hilbert::{trace_distance, uhlmann_fidelity, CMatrix, DensityMatrix};
use kerrgate::params::{chi3_cross, eta_from_ensemble, preset, Preset, EPSILON_0, HBAR};
use kerrgate::pulse::{DrivePulse, QuadSettings};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn chi3_matches_exact_rational_evaluation() {
    for p in Preset::ALL {
        let (_, mut ens) = preset(p).unwrap();
        ens.dipole_21 = Some(2.3e-29);
        ens.dipole_43 = Some(4.1e-30);
        if ens.volume.is_none() {
            ens.volume = Some(1.0e-9);
        }
        let got = chi3_cross(&ens).unwrap().chi3_cross;

        let d21 = q(ens.dipole_21.unwrap());
        let d43 = q(ens.dipole_43.unwrap());
        let micro = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
        let volume = q(ens.volume.unwrap()) * micro;
        let hbar = q(HBAR);
        let two = BigRational::from_integer(BigInt::from(2));
        let pref = -(two * q(ens.n_atoms) * &d21 * &d21 * &d43 * &d43)
            / (&hbar * &hbar * &hbar * q(EPSILON_0) * volume);
        let delta = q(ens.detuning_mu);
        let gamma = q(ens.decay_1) + q(ens.decay_43);
        let sat = q(ens.control_rabi) * q(ens.control_rabi)
            + q(ens.coupling_mu) * q(ens.coupling_mu) * q(ens.mean_photons_mu);
        // 1 / (Delta - i Gamma) = (Delta + i Gamma) / (Delta^2 + Gamma^2)
        let den = (&delta * &delta + &gamma * &gamma) * sat;
        let re = (&pref * &delta / &den).to_f64().unwrap();
        let im = (&pref * &gamma / &den).to_f64().unwrap();

        assert!(rel(got.re, re) < 1e-13, "{p}: re {} vs {re}", got.re);
        if im.is_zero() {
            assert_eq!(got.im, 0.0);
        } else {
            assert!(rel(got.im, im) < 1e-13, "{p}: im {} vs {im}", got.im);
        }
    }
}

#[test]
fn eta_matches_exact_rational_evaluation() {
    for p in Preset::ALL {
        let (_, ens) = preset(p).unwrap();
        let got = eta_from_ensemble(&ens).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let delta = q(ens.detuning_mu);
        let gamma = q(ens.decay_1) + q(ens.decay_43);
        let sat = q(ens.control_rabi) * q(ens.control_rabi)
            + q(ens.coupling_mu) * q(ens.coupling_mu) * q(ens.mean_photons_mu);
        let num = -(two * q(ens.n_atoms) * q(ens.coupling_o) * q(ens.coupling_o)
            * q(ens.coupling_mu) * q(ens.coupling_mu) * &delta);
        let want = (num / ((&delta * &delta + &gamma * &gamma) * sat)).to_f64().unwrap();
        assert!(rel(got, want) < 1e-13, "{p}: {got} vs {want}");
    }
}

fn random_density(rng: &mut ChaCha8Rng, n: usize) -> (CMatrix<f64>, DMatrix<Complex64>) {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = &g * g.adjoint();
    let rho = &rho / rho.trace();
    let ours = CMatrix::from_fn(n, |i, j| rho[(i, j)]);
    (ours, rho)
}

fn nalgebra_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let e = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

#[test]
fn fidelity_and_distance_match_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (a, na) = random_density(&mut rng, 4);
        let (b, nb) = random_density(&mut rng, 4);
        let s = nalgebra_sqrt(&na);
        let inner = &s * &nb * &s;
        let root: f64 = inner.symmetric_eigen().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum();
        let want_f = root * root;
        let want_d: f64 = (&na - &nb).symmetric_eigen().eigenvalues.iter().map(|l| l.abs()).sum::<f64>() / 2.0;

        let (a, b) = (DensityMatrix::new(a).unwrap(), DensityMatrix::new(b).unwrap());
        let f = uhlmann_fidelity(&a, &b).unwrap();
        let d = trace_distance(&a, &b).unwrap();
        assert!((f - want_f).abs() < 1e-10, "{f} vs {want_f}");
        assert!((d - want_d).abs() < 1e-10, "{d} vs {want_d}");
        assert!((f - uhlmann_fidelity(&b, &a).unwrap()).abs() < 1e-10);
    }
}

/// `int |f|^2 / (w^2 + 1) dw` at `sigma = 0.2`, from the closed form
/// `sqrt(pi)/sigma * erfcx(1/sigma)` evaluated at 30 digits.
const LORENTZ_GAUSS: f64 = 0.981_094_307_315_387_9;

#[test]
fn lorentzian_gaussian_integral_matches_trapezoid() {
    let p = DrivePulse::new(0.0, 0.2, Complex64::new(1.0, 0.0)).unwrap();
    let qd = p.quadrature(QuadSettings::default(), &[]).unwrap();
    let got = p.weighted_integral(&qd, |w| Complex64::new(1.0 / (w * w + 1.0), 0.0)).unwrap();

    let n = 1_000_000;
    let (a, b) = (-4.0, 4.0);
    let h = (b - a) / n as f64;
    let g = |w: f64| p.spectral_density(w) / (w * w + 1.0);
    let mut trap = 0.5 * (g(a) + g(b));
    for k in 1..n {
        trap += g(a + k as f64 * h);
    }
    trap *= h;

    assert!(got.re > 0.9 && got.re < 1.0);
    assert!(got.im.abs() < 1e-15);
    assert!((got.re - trap).abs() < 1e-9, "{} vs {trap}", got.re);
    assert!((got.re - LORENTZ_GAUSS).abs() < 1e-12);
}

#[test]
fn parseval() {
    let p = DrivePulse::new(0.4, 0.2, Complex64::new(1.0, 0.0)).unwrap();
    let qd = p.quadrature(QuadSettings::default(), &[]).unwrap();
    let spectral = p.weighted_integral(&qd, |_| Complex64::new(1.0, 0.0)).unwrap();
    assert!((spectral.re - 1.0).abs() < 1e-9);

    let st = p.sigma_t();
    let n = 200_000;
    let (a, b) = (-12.0 * st, 12.0 * st);
    let h = (b - a) / n as f64;
    let temporal: f64 = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            w * p.time_profile(a + k as f64 * h).powi(2)
        })
        .sum::<f64>()
        * h;
    assert!((temporal - 1.0).abs() < 1e-9, "{temporal}");
}

#[test]
fn spectral_peak() {
    let p = DrivePulse::new(0.0, 0.2, Complex64::new(1.0, 0.0)).unwrap();
    let want = 1.0 / (std::f64::consts::PI.sqrt() * 0.2);
    assert!((p.spectral_density(0.0) - want).abs() < 1e-14);
}

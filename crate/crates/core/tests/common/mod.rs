#![allow(dead_code)]

use kerrgate::{process_metrics, EntConfig, GateConfig};
use num_complex::Complex64;

pub const TAU: f64 = std::f64::consts::TAU;

/// Lossless gate with a narrow pulse and a strong coupling tuned so that the
/// backaction phase is a whole number of turns.
pub fn ideal_gate(target_eta_norm: f64) -> GateConfig<f64> {
    let mut cfg = GateConfig::new(1.0, 1.0);
    cfg.sigma_omega = 1e-4;
    // At Delta_in = -eta the resonant branch sees d = -w, so theta is linear in eta.
    let theta1 = process_metrics(&cfg).unwrap().theta_mu;
    let m = (theta1 * target_eta_norm / TAU).round();
    cfg.eta_norm = TAU * m / theta1;
    cfg
}

/// Entanglement counterpart of [`ideal_gate`].
pub fn ideal_ent(target_x: f64, alpha: Complex64) -> EntConfig<f64> {
    let mut cfg = EntConfig::new(1.0, 1.0);
    cfg.sigma_omega = 1e-4;
    cfg.alpha = alpha;
    let theta1 = kerrgate::entanglement_fidelity(&cfg).unwrap().theta;
    let m = (theta1 * target_x / TAU).round();
    cfg.eta_norm_alpha = TAU * m / theta1;
    cfg
}

pub fn wrapped(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    t.min(TAU - t)
}

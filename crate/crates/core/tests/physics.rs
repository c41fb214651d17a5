mod common;

use common::{ideal_ent, ideal_gate, wrapped, TAU};
use kerrgate::scattering::{backaction_phase, scatter_set, BranchLabel, Polarization};
use kerrgate::{
    entanglement_fidelity, evaluate, process_metrics, scatter_map, sweep_ent, sweep_gate, EntAxis,
    EntConfig, Estimator, GateConfig, QuadSettings, CANONICAL_BRANCHES,
};
use num_complex::Complex64;

#[test]
fn ideal_gate_every_estimator() {
    let base = ideal_gate(4000.0);
    for est in Estimator::ALL {
        for correct in [false, true] {
            let mut cfg = base;
            cfg.estimator = est;
            cfg.correct_backaction = correct;
            let m = process_metrics(&cfg).unwrap();
            assert!(wrapped(m.theta_mu) < 1e-8, "theta {}", m.theta_mu);
            assert!(1.0 - m.fidelity < 1e-6, "{est}: F = {}", m.fidelity);
            assert!(m.distance < 1e-3, "{est}: D = {}", m.distance);
        }
    }
}

#[test]
fn ideal_gate_amplitudes_match_target() {
    let cfg = ideal_gate(4000.0);
    let s = cfg.system().unwrap().scatter(cfg.quad).unwrap();
    let v = scatter_map(false, &s).unwrap();
    for (vj, uj) in v.iter().zip(kerrgate::target_unitary::<f64>()) {
        assert!((vj - uj).norm() < 1e-3, "{vj} vs {uj}");
    }
}

#[test]
fn correction_removes_a_half_turn() {
    // theta_mu = pi exactly: correcting must give the same amplitudes as a zero phase.
    let mut cfg = ideal_gate(4000.0);
    let theta1 = process_metrics(&cfg).unwrap().theta_mu / cfg.eta_norm;
    cfg.eta_norm = (std::f64::consts::PI + TAU * (cfg.eta_norm * theta1 / TAU).round()) / theta1;
    let s = cfg.system().unwrap().scatter(cfg.quad).unwrap();
    assert!((wrapped(s.theta[3]) - std::f64::consts::PI).abs() < 1e-8);
    let corrected = scatter_map(true, &s).unwrap();
    assert_eq!(corrected[3], s.overlap[3]);
    let raw = scatter_map(false, &s).unwrap();
    assert!((raw[3] + s.overlap[3]).norm() < 1e-8);
}

#[test]
fn lossless_amplitudes_bounded_and_tighten_with_bandwidth() {
    let mut last = [0.0; 4];
    for (k, sigma) in [0.4, 0.2, 0.05, 0.01].into_iter().enumerate() {
        let mut cfg = GateConfig::new(1.0, 2.2);
        cfg.sigma_omega = sigma;
        let s = cfg.system().unwrap().scatter(cfg.quad).unwrap();
        for j in 0..4 {
            let a = s.overlap[j].norm();
            assert!(a <= 1.0 + 1e-12);
            if k > 0 {
                assert!(a >= last[j] - 1e-12, "branch {j} sigma {sigma}");
            }
            last[j] = a;
        }
        // Success trace is exactly one without intrinsic loss.
        assert!((s.weight.iter().sum::<f64>() / 4.0 - 1.0).abs() < 1e-12);
    }
    assert!(last[3] < 1.0);
}

#[test]
fn pure_choi_distance_is_pure_state_distance() {
    for kappa in [0.5, 0.8, 0.99, 1.0] {
        let m = process_metrics(&GateConfig::<f64>::new(kappa, 2.2)).unwrap();
        assert!((m.distance - (1.0 - m.fidelity).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn feasibility_point_corrected_not_below_uncorrected() {
    let mut cfg = GateConfig::new(0.99, 2.2);
    let raw = process_metrics(&cfg).unwrap();
    cfg.correct_backaction = true;
    let corrected = process_metrics(&cfg).unwrap();
    assert!(
        corrected.fidelity >= raw.fidelity - 1e-9,
        "corrected {} < uncorrected {}",
        corrected.fidelity,
        raw.fidelity
    );
}

#[test]
fn sweep_rows_follow_grid() {
    let grid = [0.6, 0.7, 0.8, 0.9, 1.0];
    let rows = sweep_gate(&GateConfig::new(0.99, 2.2), &grid).unwrap();
    assert_eq!(rows.len(), grid.len());
    for (r, k) in rows.iter().zip(grid) {
        assert_eq!(r.kappa_ratio, k);
    }
}

#[test]
fn ideal_entanglement_and_kittens() {
    let alpha = Complex64::new(1.0, 0.0);
    let cfg = ideal_ent(4000.0, alpha);
    let m = entanglement_fidelity(&cfg).unwrap();
    assert!(wrapped(m.theta) < 1e-8);
    assert!(1.0 - m.fidelity_paper_literal < 1e-6, "{}", m.fidelity_paper_literal);
    assert!(1.0 - m.fidelity_multimode < 1e-6, "{}", m.fidelity_multimode);
    let k = m.kitten;
    let e2 = (-2.0f64).exp();
    assert!((k.p_plus - (1.0 + e2) / 2.0).abs() < 1e-6);
    assert!((k.p_minus - (1.0 - e2) / 2.0).abs() < 1e-6);
    assert!((k.p_plus + k.p_minus - 1.0).abs() < 1e-12);
    assert!(1.0 - k.fidelity_plus.unwrap() < 1e-6);
    assert!(1.0 - k.fidelity_minus.unwrap() < 1e-6);
}

#[test]
fn kitten_probabilities_approach_even_split() {
    let cfg = ideal_ent(4000.0, Complex64::new(2.0, 0.0));
    let k = entanglement_fidelity(&cfg).unwrap().kitten;
    assert!((k.p_plus - 0.5).abs() < 2e-4);
}

#[test]
fn global_phase_of_alpha_is_irrelevant() {
    let base = EntConfig::new(0.95, 3.7);
    let a = entanglement_fidelity(&base).unwrap();
    let mut rotated = base;
    rotated.alpha = Complex64::from_polar(1.0, 1.1);
    let b = entanglement_fidelity(&rotated).unwrap();
    assert!((a.fidelity_paper_literal - b.fidelity_paper_literal).abs() < 1e-12);
    assert!((a.fidelity_multimode - b.fidelity_multimode).abs() < 1e-12);
    assert!((a.theta - b.theta).abs() < 1e-12);
}

#[test]
fn theta_linear_in_eta_alpha() {
    let grid: Vec<f64> = (0..9).map(|i| 2.0 + 0.5 * i as f64).collect();
    let rows = sweep_ent(&EntConfig::new(0.99, 3.0), EntAxis::EtaNormAlpha, &grid).unwrap();
    let slope = (rows[8].metrics.theta - rows[0].metrics.theta) / (grid[8] - grid[0]);
    for r in &rows {
        let fit = rows[0].metrics.theta + slope * (r.x - grid[0]);
        assert!((r.metrics.theta - fit).abs() / TAU < 0.05, "x = {}", r.x);
    }
}

#[test]
fn fidelity_peaks_near_whole_turns() {
    let grid: Vec<f64> = (0..=400).map(|i| 2.0 + 0.01 * i as f64).collect();
    let rows = sweep_ent(&EntConfig::new(0.99, 3.0), EntAxis::EtaNormAlpha, &grid).unwrap();
    let f: Vec<f64> = rows.iter().map(|r| r.metrics.fidelity).collect();
    let peaks: Vec<usize> = (1..f.len() - 1).filter(|&i| f[i] > f[i - 1] && f[i] >= f[i + 1]).collect();
    assert!(!peaks.is_empty());
    for i in peaks {
        let turns = rows[i].metrics.theta / TAU;
        assert!((turns - turns.round()).abs() < 0.1, "peak at theta/2pi = {turns}");
    }
}

#[test]
fn gram_matches_overlaps_for_shared_polarization() {
    let cfg = GateConfig::new(0.9, 3.0);
    let sys = cfg.system().unwrap();
    let s = scatter_set(&CANONICAL_BRANCHES, &sys.pulse, &sys.cavity, &sys.kerr, cfg.quad).unwrap();
    // Branches with different polarization are orthogonal.
    assert_eq!(s.gram[(0, 1)].norm(), 0.0);
    assert!(s.gram[(0, 2)].norm() > 0.0);
    let m = evaluate(&s, Estimator::PureChoi, false).unwrap();
    assert!(m.fidelity > 0.0);
}

#[test]
fn theta_scales_with_mean_photon_number() {
    let cfg = EntConfig::new(0.9, 3.0);
    let m = entanglement_fidelity(&cfg).unwrap();
    let sys = cfg;
    let mut doubled = sys;
    doubled.alpha = Complex64::new(2f64.sqrt(), 0.0);
    doubled.eta_norm_alpha = sys.eta_norm_alpha * 2.0;
    // Same eta, twice the photons: theta doubles.
    let m2 = entanglement_fidelity(&doubled).unwrap();
    assert!((m2.theta - 2.0 * m.theta).abs() < 1e-12 * m.theta.abs().max(1.0));
}

#[test]
fn f32_smoke() {
    let mut cfg = GateConfig::<f32>::new(0.99, 2.2);
    cfg.quad = QuadSettings {
        rel_tol: 1e-5,
        abs_tol: 1e-7,
        ..QuadSettings::default()
    };
    let m = process_metrics(&cfg).unwrap();
    let m64 = process_metrics(&GateConfig::<f64>::new(0.99, 2.2)).unwrap();
    assert!((m.fidelity as f64 - m64.fidelity).abs() < 1e-3, "{} vs {}", m.fidelity, m64.fidelity);

    let mut e = EntConfig::<f32>::new(0.99, 4.21);
    e.quad = cfg.quad;
    let em = entanglement_fidelity(&e).unwrap();
    assert!((em.fidelity - 0.89).abs() < 0.03);
}

#[test]
fn backaction_ignores_left_polarization() {
    let cfg = GateConfig::new(0.9, 3.0);
    let sys = cfg.system().unwrap();
    let b = BranchLabel::new(1, Polarization::L);
    assert_eq!(backaction_phase(b, &sys.pulse, &sys.cavity, &sys.kerr, cfg.quad).unwrap(), 0.0);
}

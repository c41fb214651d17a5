//! Hybrid controlled-Z gate and hybrid entanglement through a cross-Kerr
//! coupled pair of cavities.
//!
//! A polarization-encoded photon (or a coherent pulse) reflects off the
//! b-cavity, whose resonance is shifted by `eta * n` for right-circular
//! light when the g-cavity holds `n` photons. Frequencies are in units of
//! `kappa_o` unless stated otherwise, with the carrier at zero.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the common instantiations.

pub mod entangle;
pub mod error;
pub mod gate;
pub mod hilbert;
pub mod params;
pub mod pulse;
pub mod scalar;
pub mod scattering;

pub use entangle::{
    entanglement_fidelity, kitten_projection, sweep_ent, EntAxis, EntConfig, EntMetrics, EntRow,
    Formula, KittenProjection,
};
pub use error::{Error, Result};
pub use gate::{
    evaluate, process_metrics, scatter_map, sweep_gate, target_unitary, DetuningRule, Estimator,
    GateConfig, GateMetrics, GateRow, GateSystem, CANONICAL_BRANCHES,
};
pub use hilbert::{
    coherent_overlap, multimode_coherent_overlap, trace_distance, uhlmann_fidelity, CMatrix,
    CoherentAmplitude, DensityMatrix, ModeLabel,
};
pub use params::{
    chi3_cross, eta_from_ensemble, eta_from_norm, eta_norm, preset, AtomEnsemble, CavityPair,
    KerrCoupling, Preset,
};
pub use pulse::{DrivePulse, QuadSettings, Quadrature};
pub use scalar::Real;
pub use scattering::{
    backaction_phase, intracavity_response, reflection, scatter_set, BranchLabel, Polarization,
    ScatterSet,
};

pub type CavityPair64 = CavityPair<f64>;
pub type CavityPair32 = CavityPair<f32>;
pub type KerrCoupling64 = KerrCoupling<f64>;
pub type DrivePulse64 = DrivePulse<f64>;
pub type ScatterSet64 = ScatterSet<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type GateConfig64 = GateConfig<f64>;
pub type GateConfig32 = GateConfig<f32>;
pub type GateMetrics64 = GateMetrics<f64>;
pub type GateMetrics32 = GateMetrics<f32>;
pub type EntConfig64 = EntConfig<f64>;
pub type EntMetrics64 = EntMetrics<f64>;

//! Small dense complex linear algebra and quantum-information metrics.

mod coherent;
mod density;
mod eigen;
mod matrix;

pub use coherent::{coherent_overlap, multimode_coherent_overlap, CoherentAmplitude, ModeLabel};
pub(crate) use coherent::single_mode_overlap;
pub use density::{psd_sqrt, trace_distance, uhlmann_fidelity, DensityMatrix, MAX_DIM};
pub use eigen::{hermitian_eigen, min_eigenvalue, HermitianEigen};
pub use matrix::CMatrix;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigen;
use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 32;

/// Positive semidefinite Hermitian matrix, not necessarily unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix<T> {
    matrix: CMatrix<T>,
    trace: T,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let n = matrix.dim();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Linalg(format!(
                "density matrix dimension {n} outside 1..={MAX_DIM}"
            )));
        }
        let scale = T::one().max(matrix.max_abs());
        let defect = matrix.hermiticity_defect();
        if defect > T::tol(1e-12) * scale {
            return Err(Error::Linalg(format!("matrix is not Hermitian (defect {defect})")));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eigen(&matrix)?.values[0];
        if min < -T::tol(1e-10) * scale {
            return Err(Error::Linalg(format!(
                "matrix is not positive semidefinite (min eigenvalue {min})"
            )));
        }
        let trace = matrix.trace().re;
        if !(trace > T::zero() && trace <= T::lit(n as f64) * (T::one() + T::tol(1e-12))) {
            return Err(Error::Linalg(format!("trace {trace} outside (0, {n}]")));
        }
        Ok(DensityMatrix { matrix, trace })
    }

    /// `|psi><psi|` for an unnormalized state vector.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        Self::new(CMatrix::outer(psi))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> T {
        self.trace
    }

    pub fn normalized(&self) -> Self {
        let matrix = self.matrix.scale(T::one() / self.trace);
        let trace = matrix.trace().re;
        DensityMatrix { matrix, trace }
    }

    /// Zero-padded copy living in a larger space.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim > MAX_DIM || dim < self.dim() {
            return Err(Error::Linalg(format!("cannot embed dimension {} into {dim}", self.dim())));
        }
        Ok(DensityMatrix {
            matrix: self.matrix.embed(dim),
            trace: self.trace,
        })
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::domain(
                "density",
                format!("dimension mismatch: {} vs {}", self.dim(), other.dim()),
            ));
        }
        for (name, t) in [("rho", self.trace), ("sigma", other.trace)] {
            if (t - T::one()).abs() > T::tol(1e-9) {
                return Err(Error::domain(name, format!("trace must be 1, got {t}")));
            }
        }
        Ok(())
    }
}

/// Square root of a PSD matrix; eigenvalues down to `-1e-10` are clamped to zero.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let e = hermitian_eigen(m)?;
    let floor = -T::tol(1e-10) * T::one().max(m.max_abs());
    if let Some(&min) = e.values.first() {
        if min < floor {
            return Err(Error::Linalg(format!(
                "square root of a matrix with eigenvalue {min}"
            )));
        }
    }
    let noise = roundoff_floor(&e.values);
    Ok(e.map_values(|l| if l > noise { l.sqrt() } else { T::zero() }))
}

/// Eigenvalues at or below this level are roundoff; their square roots
/// would otherwise be amplified to ~1e-8.
fn roundoff_floor<T: Real>(values: &[T]) -> T {
    let scale = values.iter().fold(T::zero(), |m, l| m.max(l.abs()));
    T::lit(values.len().max(1) as f64) * T::epsilon() * scale * T::lit(4.0)
}

/// Uhlmann fidelity `[tr sqrt(sqrt(rho) sigma sqrt(rho))]^2`.
pub fn uhlmann_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.check_pair(sigma)?;
    let s = psd_sqrt(rho.matrix())?;
    let inner = &(&s * sigma.matrix()) * &s;
    let e = hermitian_eigen(&inner)?;
    if let Some(&min) = e.values.first() {
        if min < -T::tol(1e-10) {
            return Err(Error::domain(
                "fidelity",
                format!("sqrt(rho) sigma sqrt(rho) has eigenvalue {min}"),
            ));
        }
    }
    let noise = roundoff_floor(&e.values);
    let root_sum: T = e
        .values
        .iter()
        .map(|&l| if l > noise { l.sqrt() } else { T::zero() })
        .sum();
    Ok((root_sum * root_sum).min(T::one()).max(T::zero()))
}

/// Trace distance `1/2 tr|rho - sigma|`.
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.check_pair(sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let e = hermitian_eigen(&diff)?;
    let d: T = e.values.iter().map(|l| l.abs()).sum::<T>() * T::half();
    Ok(d.min(T::one()).max(T::zero()))
}

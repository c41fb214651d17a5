//! Cyclic Jacobi diagonalization of small Hermitian matrices.

use num_complex::Complex;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Rebuilds `V diag(g(lambda)) V^H`.
    pub fn map_values(&self, g: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.values.len();
        let mapped: Vec<T> = self.values.iter().map(|&l| g(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * mapped[k]
            })
        })
    }
}

/// Diagonalizes the Hermitian part of `a`.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.dim();
    let mut a = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let zero = Complex::new(T::zero(), T::zero());

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let (mut off, mut total) = (T::zero(), T::zero());
        for i in 0..n {
            for j in 0..n {
                let m = a[(i, j)].norm_sqr();
                total = total + m;
                if i != j {
                    off = off + m;
                }
            }
        }
        if off == T::zero() || off.sqrt() <= T::epsilon() * total.sqrt() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let h = apq.norm();
                if h == T::zero() {
                    continue;
                }
                // Phase that makes the pivot real, then a real rotation.
                let phase = apq / h;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (T::two() * h);
                let t = if tau == T::zero() {
                    T::one()
                } else {
                    tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let e_minus = phase.conj();

                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * c - e_minus * y * s;
                    a[(k, q)] = x * s + e_minus * y * c;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = x * c - phase * y * s;
                    a[(q, k)] = x * s + phase * y * c;
                }
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * c - e_minus * y * s;
                    v[(k, q)] = x * s + e_minus * y * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Linalg(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue<T: Real>(a: &CMatrix<T>) -> Result<T> {
    let e = hermitian_eigen(a)?;
    Ok(e.values.first().copied().unwrap_or(T::zero()))
}

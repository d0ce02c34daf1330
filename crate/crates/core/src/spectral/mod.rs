//! Dense eigenvalues, singular values, numerical rank and identity reports.

mod assign;
mod eigen;
mod svd;
pub mod verify;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;

pub use assign::{match_points, matching_distance, min_separation};
pub use verify::{verify_identity, IdentityName, IdentityParams, VerificationReport};

/// Anything that exposes a dense complex matrix.
pub trait AsMatrix {
    fn matrix(&self) -> &DMatrix<Complex64>;
}

impl AsMatrix for DMatrix<Complex64> {
    fn matrix(&self) -> &DMatrix<Complex64> {
        self
    }
}

impl AsMatrix for crate::tto::OperatorMatrix {
    fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }
}

impl<T: AsMatrix + ?Sized> AsMatrix for &T {
    fn matrix(&self) -> &DMatrix<Complex64> {
        (**self).matrix()
    }
}

/// Absolute floor below which a singular value never counts toward rank.
pub const RANK_FLOOR: f64 = 1e-12;
/// Default relative rank threshold.
pub const RANK_TOL: f64 = 1e-9;

/// Spectral data of one matrix. Fields not requested stay empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<Complex64>,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `||M x - lambda x|| / ||M||` per eigenpair.
    pub residuals: Vec<f64>,
}

/// Eigenvalues with per-pair relative residuals.
pub fn eigenvalues<M: AsMatrix>(m: M) -> Result<SpectralResult> {
    let m = m.matrix();
    assert_eq!(m.nrows(), m.ncols(), "eigenvalues need a square matrix");
    let e = eigen::eigen(m)?;
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let residuals = e
        .values
        .iter()
        .zip(e.vectors.column_iter())
        .map(|(&lambda, x)| (m * x - x * lambda).norm() / scale)
        .collect();
    Ok(SpectralResult {
        eigenvalues: e.values,
        singular_values: Vec::new(),
        residuals,
    })
}

pub fn singular_values<M: AsMatrix>(m: M) -> Result<SpectralResult> {
    Ok(SpectralResult {
        singular_values: svd::singular_values(m.matrix())?,
        ..SpectralResult::default()
    })
}

/// Rank from already computed descending singular values.
pub fn rank_of(singular_values: &[f64], rel_tol: f64) -> usize {
    let Some(&top) = singular_values.first() else {
        return 0;
    };
    let cut = (rel_tol * top).max(RANK_FLOOR);
    singular_values.iter().filter(|&&s| s > cut).count()
}

/// Count of `sigma_i > max(rel_tol sigma_1, 1e-12)`.
pub fn numerical_rank<M: AsMatrix>(m: M, rel_tol: f64) -> Result<usize> {
    Ok(rank_of(&svd::singular_values(m.matrix())?, rel_tol))
}

/// Spectral norm.
pub fn operator_norm<M: AsMatrix>(m: M) -> Result<f64> {
    Ok(svd::singular_values(m.matrix())?.first().copied().unwrap_or(0.0))
}

/// Dimension of the Krylov space of `v` under `m`, by Arnoldi with
/// re-orthogonalization; stops at the first step whose new direction is
/// below `rel_tol * ||m||` (relative to the vector it came from).
pub fn krylov_rank<M: AsMatrix>(m: M, v: &[Complex64], rel_tol: f64) -> usize {
    let m = m.matrix();
    let n = m.nrows();
    let v0 = nalgebra::DVector::from_column_slice(v);
    let norm = v0.norm();
    if norm == 0.0 {
        return 0;
    }
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut basis = vec![v0 / Complex64::new(norm, 0.0)];
    while basis.len() < n {
        let mut w = m * basis.last().expect("non-empty basis");
        for _ in 0..2 {
            for q in &basis {
                let h = q.dotc(&w);
                w -= q * h;
            }
        }
        let h = w.norm();
        if h <= rel_tol * scale {
            break;
        }
        basis.push(w / Complex64::new(h, 0.0));
    }
    basis.len()
}

/// 1-based index `ceil(n * num / den)`, clamped to `1..=n`.
pub fn fraction_index(n: usize, num: usize, den: usize) -> usize {
    ((n * num).div_ceil(den)).clamp(1, n.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_eigenvalues() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0)]));
        let r = eigenvalues(&m).unwrap();
        assert_eq!(r.eigenvalues, vec![c(1.0, 0.0), c(0.0, 2.0)]);
        assert!(r.residuals.iter().all(|&x| x < 1e-15));
    }

    #[test]
    fn rank_examples() {
        let z = DMatrix::<Complex64>::zeros(4, 4);
        assert_eq!(numerical_rank(&z, 1e-9).unwrap(), 0);
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert_eq!(numerical_rank(&id, 1e-9).unwrap(), 4);
        assert_eq!(rank_of(&[1.0, 1e-8, 1e-10], 1e-9), 2);
        assert_eq!(rank_of(&[1e-13], 1e-9), 0);
    }

    #[test]
    fn krylov_of_shift() {
        // lower shift on e_1 reaches everything, on e_n only itself
        let mut a = DMatrix::<Complex64>::zeros(4, 4);
        for k in 0..3 {
            a[(k + 1, k)] = c(1.0, 0.0);
        }
        let mut e = vec![c(0.0, 0.0); 4];
        e[0] = c(1.0, 0.0);
        assert_eq!(krylov_rank(&a, &e, 1e-9), 4);
        e[0] = c(0.0, 0.0);
        e[3] = c(1.0, 0.0);
        assert_eq!(krylov_rank(&a, &e, 1e-9), 1);
        assert_eq!(krylov_rank(&a, &[c(0.0, 0.0); 4], 1e-9), 0);
    }

    #[test]
    fn fraction_indices() {
        assert_eq!(fraction_index(48, 1, 2), 24);
        assert_eq!(fraction_index(9, 1, 4), 3);
        assert_eq!(fraction_index(1, 1, 4), 1);
    }
}

//! Dense SVD through faer. nalgebra's bidiagonal SVD loses accuracy on
//! tightly clustered singular values, which correlation matrices of doped
//! circuits have by construction.

use faer::Mat;
use nalgebra::{DMatrix, DVector};

use crate::dense::C64;
use crate::error::{Error, Result};

/// `m = u · diag(s) · vᴴ`, singular values non-increasing.
#[derive(Clone, Debug)]
pub struct Svd<T: nalgebra::Scalar> {
    pub u: DMatrix<T>,
    pub s: DVector<f64>,
    pub v: DMatrix<T>,
}

fn to_faer<T: faer::traits::ComplexField + nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: faer::traits::ComplexField + nalgebra::Scalar + Copy>(m: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn failed<E: std::fmt::Debug>(e: E) -> Error {
    Error::Eigen(format!("svd did not converge: {e:?}"))
}

pub fn real_svd(m: &DMatrix<f64>) -> Result<Svd<f64>> {
    let svd = to_faer(m).svd().map_err(failed)?;
    let s = svd.S().column_vector();
    Ok(Svd {
        u: from_faer(svd.U()),
        s: DVector::from_fn(s.nrows(), |i, _| s[i]),
        v: from_faer(svd.V()),
    })
}

pub fn complex_svd(m: &DMatrix<C64>) -> Result<Svd<C64>> {
    let svd = to_faer(m).svd().map_err(failed)?;
    let s = svd.S().column_vector();
    Ok(Svd {
        u: from_faer(svd.U()),
        s: DVector::from_fn(s.nrows(), |i, _| s[i].re),
        v: from_faer(svd.V()),
    })
}

/// Singular values of a real matrix, non-increasing.
pub fn real_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m)
        .singular_values()
        .expect("faer singular values converge on finite input")
}

/// Singular values of a complex matrix, non-increasing.
pub fn complex_singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m)
        .singular_values()
        .expect("faer singular values converge on finite input")
}

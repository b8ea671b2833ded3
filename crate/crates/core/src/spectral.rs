//! SVD with orthogonality repair, the singular-value partitioning ladder,
//! canonical angles and subspace matching.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{orthogonality_residual, OrthogonalMatrix};
use crate::linalg::{real_singular_values, real_svd};

pub const SVD_RESIDUAL_TOL: f64 = 1e-8;

/// `M = V_A · diag(sigma) · V_Bᵀ` with `sigma` non-increasing.
#[derive(Clone, Debug)]
pub struct SvdTriple {
    pub v_a: OrthogonalMatrix,
    pub sigma: Vec<f64>,
    pub v_b: OrthogonalMatrix,
}

impl SvdTriple {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.sigma));
        self.v_a.matrix() * s * self.v_b.matrix().transpose()
    }
}

pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    real_singular_values(m)[0]
}

/// Nearest orthogonal matrix (polar factor `U Wᵀ` of `X = U Σ Wᵀ`).
pub fn polar_orthogonal(x: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = real_svd(x).expect("faer svd converges on finite input");
    svd.u * svd.v.transpose()
}

/// Singular value decomposition with sorted values and polar-repaired factors.
pub fn orthogonal_svd(m: &DMatrix<f64>) -> Result<SvdTriple> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite matrix entry".into()));
    }
    let (r, c) = m.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "expected a 2n x 2n matrix, got {r}x{c}"
        )));
    }
    let svd = real_svd(m)?;
    let sigma: Vec<f64> = svd.s.iter().copied().collect();
    let v_a = repair(svd.u)?;
    let v_b = repair(svd.v)?;
    let triple = SvdTriple {
        v_a,
        sigma,
        v_b,
    };
    let residual = (triple.reconstruct() - m).amax();
    if residual > SVD_RESIDUAL_TOL {
        return Err(Error::SvdResidual { residual });
    }
    Ok(triple)
}

fn repair(v: DMatrix<f64>) -> Result<OrthogonalMatrix> {
    if orthogonality_residual(&v) <= 1e-14 {
        return OrthogonalMatrix::new(v);
    }
    OrthogonalMatrix::new(polar_orthogonal(&v))
}

/// Outcome of the descending threshold ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub k: usize,
    pub k_prime: usize,
    /// Threshold for `ℓ = k, k+1, …, 2n`.
    pub thresholds: Vec<f64>,
    /// Numeric verdict `σ_ℓ ≥ threshold_ℓ` for the same range.
    pub verdicts: Vec<bool>,
    /// Spacing between consecutive thresholds; the guaranteed gap
    /// `σ_{k'} − σ_{k'+1}` whenever `ℓ = k'` passed numerically.
    pub zeta_lower_bound: f64,
    /// `ℓ = k` failed its threshold: the promise is violated or the noise is too large.
    pub clamped: bool,
}

impl PartitionResult {
    /// How far `σ_k` fell short of its threshold (zero unless clamped).
    pub fn shortfall(&self, sigma: &[f64]) -> f64 {
        if !self.clamped || self.k == 0 {
            return 0.0;
        }
        (self.thresholds[0] - sigma[self.k - 1]).max(0.0)
    }
}

/// Threshold step `ε² / (700 · t(t+1) · 2^{t/2})`.
pub fn partition_step(epsilon: f64, t: usize) -> f64 {
    let tf = t as f64;
    let t_factor = if t == 0 { 1.0 } else { tf * (tf + 1.0) };
    epsilon * epsilon / (700.0 * t_factor * 2f64.powf(tf / 2.0))
}

/// Largest `ℓ ∈ {k, …, 2n}` with `σ_ℓ ≥ 1 − (ℓ − k + 1)·step`; `k` when none passes.
pub fn partition_singular_values(sigma: &[f64], k: usize, epsilon: f64, t: usize) -> PartitionResult {
    let size = sigma.len();
    let k = k.min(size);
    let step = partition_step(epsilon, t);
    let mut thresholds = Vec::with_capacity(size - k + 1);
    let mut verdicts = Vec::with_capacity(size - k + 1);
    let mut k_prime = k;
    for ell in k..=size {
        let threshold = 1.0 - (ell - k + 1) as f64 * step;
        let pass = if ell == 0 {
            true
        } else {
            sigma[ell - 1] >= threshold
        };
        thresholds.push(threshold);
        verdicts.push(pass);
        if pass {
            k_prime = ell;
        }
    }
    PartitionResult {
        k,
        k_prime,
        thresholds,
        clamped: !verdicts[0],
        verdicts,
        zeta_lower_bound: step,
    }
}

/// Canonical angles between the column spans of `e` and `f`, ascending.
pub fn canonical_angles(e: &DMatrix<f64>, f: &DMatrix<f64>) -> Result<Vec<f64>> {
    if e.shape() != f.shape() {
        return Err(Error::ShapeMismatch {
            left: e.shape(),
            right: f.shape(),
        });
    }
    if e.ncols() == 0 {
        return Ok(Vec::new());
    }
    let cross = e.transpose() * f;
    let mut angles: Vec<f64> = real_singular_values(&cross)
        .iter()
        .map(|s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Largest canonical angle `θ(E, F)`.
pub fn largest_canonical_angle(e: &DMatrix<f64>, f: &DMatrix<f64>) -> Result<f64> {
    Ok(canonical_angles(e, f)?.last().copied().unwrap_or(0.0))
}

/// Largest angle between corresponding columns, `θ(V, W)`.
pub fn column_angle(v: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<f64> {
    if v.shape() != w.shape() {
        return Err(Error::ShapeMismatch {
            left: v.shape(),
            right: w.shape(),
        });
    }
    Ok(v.column_iter()
        .zip(w.column_iter())
        .map(|(a, b)| (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos())
        .fold(0.0, f64::max))
}

/// Eigenpairs of a symmetric matrix, eigenvalues non-increasing.
pub fn symmetric_eigen_sorted(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Orthonormal basis of the projection of `guide`'s columns onto the span of `basis`,
/// chosen to align with `guide` (orthogonal Procrustes).
fn aligned_basis(basis: &DMatrix<f64>, guide: &DMatrix<f64>) -> DMatrix<f64> {
    if guide.ncols() == 0 {
        return guide.clone();
    }
    let coords = basis.transpose() * guide;
    basis * polar_orthogonal(&coords)
}

/// Exact-SVD factors `(V_A, V_B)` of `exact` closest to the estimated
/// `(V̂_A, V̂_B)`: the leading `k` columns span the top-`k` singular subspaces of
/// `exact`, the rest the complements, each block aligned column-by-column.
pub fn matched_exact_factors(
    exact: &DMatrix<f64>,
    v_a_hat: &DMatrix<f64>,
    v_b_hat: &DMatrix<f64>,
    k: usize,
) -> Result<(OrthogonalMatrix, OrthogonalMatrix)> {
    let size = exact.nrows();
    let left = (exact * exact.transpose()).symmetrize();
    let right = (exact.transpose() * exact).symmetrize();
    let match_side = |gram: &DMatrix<f64>, guide: &DMatrix<f64>| -> Result<OrthogonalMatrix> {
        let (_, vecs) = symmetric_eigen_sorted(gram);
        let top = vecs.columns(0, k).into_owned();
        let rest = vecs.columns(k, size - k).into_owned();
        let a = aligned_basis(&top, &guide.columns(0, k).into_owned());
        let b = aligned_basis(&rest, &guide.columns(k, size - k).into_owned());
        let mut out = DMatrix::zeros(size, size);
        out.columns_mut(0, k).copy_from(&a);
        out.columns_mut(k, size - k).copy_from(&b);
        OrthogonalMatrix::new(out)
    };
    Ok((match_side(&left, v_a_hat)?, match_side(&right, v_b_hat)?))
}

trait Symmetrize {
    fn symmetrize(self) -> Self;
}

impl Symmetrize for DMatrix<f64> {
    fn symmetrize(self) -> Self {
        (&self + self.transpose()) * 0.5
    }
}

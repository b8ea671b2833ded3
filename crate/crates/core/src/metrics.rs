//! Phase-invariant distances between unitaries.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::choi::build_choi_state;
use crate::dense::{DenseOperator, C64};
use crate::error::{Error, Result};
use crate::linalg::complex_singular_values;
use crate::gaussian::OrthogonalMatrix;
use crate::spectral::{column_angle, operator_norm};

fn check_pair(u: &DenseOperator, v: &DenseOperator) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// `√(1 − |tr U†V| / d)`.
pub fn frobenius_distance(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    check_pair(u, v)?;
    let overlap = (u.matrix().adjoint() * v.matrix()).trace().norm() / u.dim() as f64;
    Ok((1.0 - overlap).max(0.0).sqrt())
}

/// Eigenphases of the unitary `U†V`.
///
/// The Cayley transform `C = i(1 − W′)(1 + W′)⁻¹` of `W′ = e^{iβ}U†V` is
/// Hermitian with eigenvalues `tan(φ′/2)`, so a Hermitian eigensolver gives the
/// phases without iterating on a non-normal form. `β` keeps `−1` out of the
/// spectrum of `W′`: the trace-aligned phase first, then a scan of rotations.
pub fn relative_phases(u: &DenseOperator, v: &DenseOperator) -> Result<Vec<f64>> {
    check_pair(u, v)?;
    let w = u.matrix().adjoint() * v.matrix();
    let d = w.nrows();
    let identity = DMatrix::<C64>::identity(d, d);
    let tr = w.trace();
    let mut candidates = Vec::with_capacity(4 * d + 1);
    if tr.norm() > 1e-8 * d as f64 {
        candidates.push(-tr.arg());
    }
    candidates.extend((0..4 * d).map(|j| TAU * j as f64 / (4 * d) as f64));
    // 2 sin(π/(8d)) is the clearance guaranteed for the best scan rotation
    let wanted = 2.0 * (PI / (8.0 * d as f64)).sin();
    let mut best: Option<(f64, f64)> = None;
    for beta in candidates {
        let shifted = &identity + &w * C64::from_polar(1.0, beta);
        let clearance = complex_singular_values(&shifted).last().copied().unwrap_or(0.0);
        if best.is_none_or(|(_, c)| clearance > c) {
            best = Some((beta, clearance));
        }
        if clearance >= wanted.max(0.5) {
            break;
        }
    }
    let (beta, _) = best.expect("at least one rotation");
    let rotated = &w * C64::from_polar(1.0, beta);
    let inverse = (&identity + &rotated)
        .try_inverse()
        .ok_or_else(|| Error::Eigen("Cayley transform is singular".into()))?;
    let cayley = (&identity - &rotated) * inverse * C64::new(0.0, 1.0);
    let hermitian = (&cayley + cayley.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(hermitian);
    Ok(eig
        .eigenvalues
        .iter()
        .map(|x| 2.0 * x.atan() - beta)
        .collect())
}

/// Shortest arc of the unit circle containing all the given phases.
pub fn spanning_arc(phases: &[f64]) -> f64 {
    if phases.len() <= 1 {
        return 0.0;
    }
    let mut sorted: Vec<f64> = phases.iter().map(|p| p.rem_euclid(TAU)).collect();
    sorted.sort_by(f64::total_cmp);
    let mut widest_gap = TAU - (sorted[sorted.len() - 1] - sorted[0]);
    for pair in sorted.windows(2) {
        widest_gap = widest_gap.max(pair[1] - pair[0]);
    }
    TAU - widest_gap
}

/// Diamond distance between the channels `ρ ↦ UρU†` and `ρ ↦ VρV†`.
///
/// Equals `2√(1 − ν²)` with `ν` the distance from the origin to the convex
/// hull of the eigenvalues of `U†V`: zero when those eigenvalues do not fit
/// in a half circle, `cos(L/2)` when they fit in an arc of length `L < π`.
pub fn diamond_distance_unitaries(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    u.ensure_unitary()?;
    v.ensure_unitary()?;
    let arc = spanning_arc(&relative_phases(u, v)?);
    if arc >= PI {
        return Ok(2.0);
    }
    Ok(2.0 * (arc / 2.0).sin())
}

/// `tr(σ_U σ_V)` for the Choi states of `U` and `V`.
pub fn choi_overlap(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    check_pair(u, v)?;
    build_choi_state(u)?.overlap(&build_choi_state(v)?)
}

/// `2n‖O − O′‖`, an upper bound on the diamond distance of the realized Gaussians.
pub fn gaussian_diamond_bound(o: &OrthogonalMatrix, o_prime: &OrthogonalMatrix) -> Result<f64> {
    if o.size() != o_prime.size() {
        return Err(Error::DimensionMismatch {
            left: o.size(),
            right: o_prime.size(),
        });
    }
    Ok(2.0 * o.modes() as f64 * operator_norm(&(o.matrix() - o_prime.matrix())))
}

/// `4n^{3/2} sin θ(O, O′)` with `θ` the largest angle between matching columns.
pub fn gaussian_angle_bound(o: &OrthogonalMatrix, o_prime: &OrthogonalMatrix) -> Result<f64> {
    let theta = column_angle(o.matrix(), o_prime.matrix())?;
    let n = o.modes() as f64;
    // past a right angle the columns are at least orthogonal; sin saturates at 1
    Ok(4.0 * n.powf(1.5) * theta.min(PI / 2.0).sin())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub frobenius: f64,
    pub diamond: f64,
    pub choi_overlap: Option<f64>,
    /// `frobenius ≤ diamond ≤ √(2d)·frobenius` within 1e-8. The upper half can
    /// fail for close pairs: `U = 1`, `V = diag(1, i)` gives diamond `√2` against
    /// `√(2d)·frobenius ≈ 1.082`.
    pub bounds_ok: bool,
    /// `frobenius ≤ diamond ≤ 2√d·frobenius` within 1e-8, which always holds.
    pub relaxed_bounds_ok: bool,
}

pub fn distance_report(u: &DenseOperator, v: &DenseOperator, with_choi: bool) -> Result<DistanceReport> {
    let frobenius = frobenius_distance(u, v)?;
    let diamond = diamond_distance_unitaries(u, v)?;
    let choi_overlap = if with_choi { Some(choi_overlap(u, v)?) } else { None };
    let d = u.dim() as f64;
    let lower_ok = frobenius <= diamond + 1e-8;
    let bounds_ok = lower_ok && diamond <= (2.0 * d).sqrt() * frobenius + 1e-8;
    let relaxed_bounds_ok = lower_ok && diamond <= 2.0 * d.sqrt() * frobenius + 1e-8;
    Ok(DistanceReport {
        frobenius,
        diamond,
        choi_overlap,
        bounds_ok,
        relaxed_bounds_ok,
    })
}

fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

fn pure_trace_distance(w: &DMatrix<C64>, psi: &DVector<C64>) -> f64 {
    let amp = psi.dotc(&(w * psi)).norm();
    2.0 * (1.0 - (amp * amp).min(1.0)).max(0.0).sqrt()
}

/// Lower bound on the diamond distance found by direct search: maximizes the
/// trace distance `‖(U⊗1)ψ − (V⊗1)ψ‖₁` over pure inputs `ψ` on the system
/// plus a `reference_qubits`-qubit reference, with random restarts and a
/// shrinking random-perturbation hill climb. Uses no spectral information.
pub fn diamond_lower_bound_search<R: Rng + ?Sized>(
    u: &DenseOperator,
    v: &DenseOperator,
    reference_qubits: usize,
    restarts: usize,
    iterations: usize,
    rng: &mut R,
) -> Result<f64> {
    check_pair(u, v)?;
    let reference = DenseOperator::identity(reference_qubits);
    let w = (u.adjoint().matmul(v)?).kron(&reference).into_matrix();
    let dim = w.nrows();
    let mut best = 0.0f64;
    for _ in 0..restarts.max(1) {
        let mut psi = random_state(dim, rng);
        let mut value = pure_trace_distance(&w, &psi);
        let mut step = 0.5;
        for _ in 0..iterations {
            let kick = random_state(dim, rng);
            let trial = &psi + kick * C64::new(step, 0.0);
            let norm = trial.norm();
            let trial = trial / C64::new(norm, 0.0);
            let trial_value = pure_trace_distance(&w, &trial);
            if trial_value > value {
                psi = trial;
                value = trial_value;
            } else {
                step = (step * 0.97).max(1e-4);
            }
        }
        best = best.max(value);
    }
    Ok(best)
}

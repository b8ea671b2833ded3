//! Fermionic Gaussian unitaries: correlation matrices, Givens synthesis and
//! random orthogonal targets.
//!
//! Conventions. The correlation matrix of `U` is
//! `M_ab = 2^{-n} tr(γ_a · U γ_b U†)`, so column `b` holds the Majorana
//! coefficients of `U γ_b U†` and `M(U₁U₂) = M(U₁) M(U₂)`. The elementary
//! generator `exp(θ γ_a γ_b / 2)` sends `γ_a → cos θ γ_a − sin θ γ_b` and
//! `γ_b → cos θ γ_b + sin θ γ_a`; its correlation matrix is the identity with
//! the block `[[cos θ, sin θ], [−sin θ, cos θ]]` on rows/columns `{a, b}`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, C64};
use crate::error::{Error, Result};
use crate::linalg::{complex_singular_values, real_singular_values};
use crate::majorana::{majorana, majoranas, PauliTerm};

pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const CONJUGATION_TOL: f64 = 1e-8;

/// A real `2n × 2n` orthogonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix(DMatrix<f64>);

impl OrthogonalMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::InvalidParameter(format!(
                "orthogonal target must be square of even size, got {r}x{c}"
            )));
        }
        let residual = orthogonality_residual(&m);
        if residual > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self(m))
    }

    pub fn identity(size: usize) -> Self {
        Self(DMatrix::identity(size, size))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn modes(&self) -> usize {
        self.size() / 2
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_proper(&self) -> bool {
        self.determinant() > 0.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidParameter("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

/// Max-entry residual of `MᵀM − 1`.
pub fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let p = m.transpose() * m;
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - target).abs());
        }
    }
    worst
}

/// One planar rotation `exp(θ γ_a γ_b / 2)`, indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivensStep {
    pub a: usize,
    pub b: usize,
    pub theta: f64,
}

/// Gaussian unitary realizing `target`, carrying its synthesis certificate.
///
/// `dense = lift(s₁) ⋯ lift(s_r) · [γ_{2n}]`, the trailing factor present iff
/// `reflection` is set.
#[derive(Clone, Debug)]
pub struct GaussianUnitary {
    target: OrthogonalMatrix,
    dense: DenseOperator,
    givens: Vec<GivensStep>,
    reflection: bool,
}

impl GaussianUnitary {
    pub fn target(&self) -> &OrthogonalMatrix {
        &self.target
    }

    pub fn dense(&self) -> &DenseOperator {
        &self.dense
    }

    pub fn givens_sequence(&self) -> &[GivensStep] {
        &self.givens
    }

    pub fn reflection(&self) -> bool {
        self.reflection
    }

    pub fn modes(&self) -> usize {
        self.target.modes()
    }
}

/// Correlation matrix of a single Givens generator.
pub fn givens_correlation(size: usize, a: usize, b: usize, theta: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(size, size);
    let (s, c) = theta.sin_cos();
    let (i, j) = (a - 1, b - 1);
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = s;
    m[(j, i)] = -s;
    m
}

/// Dense `exp(θ γ_a γ_b / 2) = cos(θ/2) + sin(θ/2) γ_a γ_b`.
pub fn lift_givens(n: usize, a: usize, b: usize, theta: f64) -> Result<DenseOperator> {
    if a == b {
        return Err(Error::DegenerateGivens(a));
    }
    let product = majorana(n, a)?.multiply(&majorana(n, b)?)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::identity(dim, dim) * C64::new(c, 0.0);
    add_scaled_pauli(&mut m, &product, C64::new(s, 0.0));
    DenseOperator::from_matrix(m)
}

fn add_scaled_pauli(m: &mut DMatrix<C64>, p: &PauliTerm, scale: C64) {
    for j in 0..m.ncols() {
        let (row, coeff) = p.column(j);
        m[(row, j)] += coeff * scale;
    }
}

/// Left-multiplies by a Pauli word in place: `m ← P m`.
fn pauli_times(p: &PauliTerm, m: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(m.nrows(), m.ncols());
    for j in 0..m.nrows() {
        let (row, coeff) = p.column(j);
        for c in 0..m.ncols() {
            out[(row, c)] = coeff * m[(j, c)];
        }
    }
    out
}

/// `2^{-n} tr(P · A)` for a Pauli word `P`.
fn normalized_pauli_trace(p: &PauliTerm, a: &DMatrix<C64>) -> C64 {
    let dim = a.nrows();
    // tr(P A) = Σ_j Σ_i P_{i j} A_{j i}; column j of P has a single entry at row i.
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..dim {
        let (i, coeff) = p.column(j);
        acc += coeff * a[(j, i)];
    }
    acc / dim as f64
}

/// Correlation matrix `M_ab = 2^{-n} tr(γ_a U γ_b U†)` as complex numbers,
/// without any checks.
fn correlation_raw(u: &DenseOperator) -> Result<DMatrix<C64>> {
    let n = u.n_qubits();
    let gammas = majoranas(n)?;
    let ud = u.matrix().adjoint();
    let size = 2 * n;
    let mut m = DMatrix::<C64>::zeros(size, size);
    for (b, gb) in gammas.iter().enumerate() {
        let conj = u.matrix() * pauli_times(gb, &ud);
        for (a, ga) in gammas.iter().enumerate() {
            m[(a, b)] = normalized_pauli_trace(ga, &conj);
        }
    }
    Ok(m)
}

pub const IMAGINARY_TOL: f64 = 1e-10;
pub const SINGULAR_VALUE_TOL: f64 = 1e-8;

/// Exact correlation matrix of a unitary.
pub fn correlation_matrix_exact(u: &DenseOperator) -> Result<DMatrix<f64>> {
    if u.n_qubits() == 0 {
        return Err(Error::InvalidParameter(
            "correlation matrix needs at least one mode".into(),
        ));
    }
    u.ensure_unitary()?;
    let raw = correlation_raw(u)?;
    let residue = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_TOL {
        return Err(Error::ImaginaryResidue { residue });
    }
    let m = raw.map(|z| z.re);
    let top = real_singular_values(&m).first().copied().unwrap_or(0.0);
    if top > 1.0 + SINGULAR_VALUE_TOL {
        return Err(Error::SingularValueRange { value: top });
    }
    Ok(m)
}

/// Largest operator-norm residual `‖U γ_a U† − Σ_b O_{ba} γ_b‖` over `a`.
pub fn conjugation_residual(u: &DenseOperator, target: &DMatrix<f64>) -> Result<f64> {
    let n = u.n_qubits();
    let gammas = majoranas(n)?;
    let dense: Vec<DMatrix<C64>> = gammas.iter().map(|g| g.to_dense().into_matrix()).collect();
    let ud = u.matrix().adjoint();
    let mut worst = 0.0f64;
    for a in 0..2 * n {
        let mut diff = u.matrix() * &dense[a] * &ud;
        for b in 0..2 * n {
            diff -= &dense[b] * C64::new(target[(b, a)], 0.0);
        }
        let norm = complex_singular_values(&diff).first().copied().unwrap_or(0.0);
        worst = worst.max(norm);
    }
    Ok(worst)
}

/// Givens decomposition of a proper orthogonal matrix: returns steps with
/// `Q = R(s₁) R(s₂) ⋯ R(s_r)` where `R` is [`givens_correlation`].
fn givens_decompose(q: &DMatrix<f64>) -> Vec<GivensStep> {
    let size = q.nrows();
    let mut work = q.clone();
    let mut steps = Vec::new();
    for col in 0..size.saturating_sub(1) {
        for row in (col + 1..size).rev() {
            let x = work[(row - 1, col)];
            let y = work[(row, col)];
            if y.abs() < 1e-300 && x >= 0.0 {
                continue;
            }
            // Rotation on rows (row-1, row) mapping (x, y) to (r, 0) with r ≥ 0.
            let theta = y.atan2(x);
            let (s, c) = theta.sin_cos();
            for k in 0..size {
                let top = work[(row - 1, k)];
                let bottom = work[(row, k)];
                work[(row - 1, k)] = c * top + s * bottom;
                work[(row, k)] = -s * top + c * bottom;
            }
            // Applied J = R(row-1, row, θ); undo with Jᵀ = R(·, ·, −θ).
            steps.push(GivensStep {
                a: row,
                b: row + 1,
                theta: -theta,
            });
        }
    }
    steps
}

/// Builds a Gaussian unitary whose correlation matrix is `target`.
pub fn synthesize_gaussian(target: &OrthogonalMatrix) -> Result<GaussianUnitary> {
    let size = target.size();
    let n = size / 2;
    let reflection = !target.is_proper();
    let reflect_corr = reflection_correlation(size);
    let proper = if reflection {
        target.matrix() * &reflect_corr
    } else {
        target.matrix().clone()
    };
    let givens = givens_decompose(&proper);
    let dense = assemble(n, &givens, reflection)?;
    let residual = conjugation_residual(&dense, target.matrix())?;
    if residual > CONJUGATION_TOL {
        return Err(Error::SynthesisResidual { residual });
    }
    Ok(GaussianUnitary {
        target: target.clone(),
        dense,
        givens,
        reflection,
    })
}

/// Rebuilds a Gaussian unitary from a stored certificate and validates it.
pub fn gaussian_from_sequence(
    n: usize,
    givens: Vec<GivensStep>,
    reflection: bool,
) -> Result<GaussianUnitary> {
    let size = 2 * n;
    let mut corr = DMatrix::identity(size, size);
    for s in &givens {
        if s.a == 0 || s.b == 0 || s.a > size || s.b > size {
            return Err(Error::MajoranaIndex {
                modes: n,
                index: s.a.max(s.b),
            });
        }
        corr *= givens_correlation(size, s.a, s.b, s.theta);
    }
    if reflection {
        corr *= reflection_correlation(size);
    }
    let target = OrthogonalMatrix::new(corr)?;
    let dense = assemble(n, &givens, reflection)?;
    Ok(GaussianUnitary {
        target,
        dense,
        givens,
        reflection,
    })
}

fn assemble(n: usize, givens: &[GivensStep], reflection: bool) -> Result<DenseOperator> {
    let dim = 1usize << n;
    let mut acc = DMatrix::<C64>::identity(dim, dim);
    for s in givens {
        acc = acc * lift_givens(n, s.a, s.b, s.theta)?.into_matrix();
    }
    if reflection {
        acc *= majorana(n, 2 * n)?.to_dense().into_matrix();
    }
    DenseOperator::from_matrix(acc)
}

/// Correlation matrix of conjugation by `γ_{2n}`: `diag(−1, …, −1, +1)`.
pub fn reflection_correlation(size: usize) -> DMatrix<f64> {
    let mut d = -DMatrix::<f64>::identity(size, size);
    d[(size - 1, size - 1)] = 1.0;
    d
}

/// Haar-distributed element of `O(size)`.
pub fn random_orthogonal<R: Rng + ?Sized>(size: usize, rng: &mut R) -> OrthogonalMatrix {
    assert!(size > 0 && size % 2 == 0, "size must be even and positive");
    let g = DMatrix::<f64>::from_fn(size, size, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..size {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    OrthogonalMatrix(q)
}

/// Haar-random Gaussian unitary on `n` modes.
pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GaussianUnitary> {
    synthesize_gaussian(&random_orthogonal(2 * n, rng))
}

/// Number of singular values within `tol` of one.
pub fn unit_singular_value_count(m: &DMatrix<f64>, tol: f64) -> usize {
    real_singular_values(m)
        .iter()
        .filter(|&&s| (s - 1.0).abs() <= tol)
        .count()
}

/// Sorted (descending) singular values.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    real_singular_values(m)
}

/// Majorana coefficients `w_a = 2^{-n} tr(γ_a X)` of an operator.
pub fn majorana_coefficients(x: &DenseOperator) -> Result<Vec<C64>> {
    let n = x.n_qubits();
    Ok(majoranas(n)?
        .iter()
        .map(|g| normalized_pauli_trace(g, x.matrix()))
        .collect())
}

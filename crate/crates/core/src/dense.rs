//! Dense `2^n × 2^n` complex operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::complex_singular_values;

pub type C64 = Complex64;

/// Tolerance for the unitarity flag.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::DimensionMismatch { left: r, right: c });
        }
        if !r.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(r));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        Ok(Self { matrix })
    }

    /// Like [`from_matrix`](Self::from_matrix) but also enforces unitarity.
    pub fn unitary(matrix: DMatrix<C64>) -> Result<Self> {
        let op = Self::from_matrix(matrix)?;
        op.ensure_unitary()?;
        Ok(op)
    }

    pub fn identity(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self {
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn scalar(value: C64) -> Self {
        Self {
            matrix: DMatrix::from_element(1, 1, value),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            matrix: &self.matrix * factor,
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Max-entry residual of `U†U - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        let prod = self.matrix.adjoint() * &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > UNITARY_TOL {
            Err(Error::NotUnitary { residual })
        } else {
            Ok(())
        }
    }

    /// Normalized partial trace over the leading `traced` qubits:
    /// `2^{-traced} Tr_{1..traced}(self)`.
    pub fn reduce_leading(&self, traced: usize) -> Result<Self> {
        let n = self.n_qubits();
        if traced > n {
            return Err(Error::InvalidParameter(format!(
                "cannot trace {traced} of {n} qubits"
            )));
        }
        let kept = 1usize << (n - traced);
        let blocks = 1usize << traced;
        let mut out = DMatrix::<C64>::zeros(kept, kept);
        for l in 0..blocks {
            let offset = l * kept;
            out += self.matrix.view((offset, offset), (kept, kept));
        }
        out /= C64::new(blocks as f64, 0.0);
        Ok(Self { matrix: out })
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Operator (spectral) norm.
    pub fn op_norm(&self) -> f64 {
        complex_singular_values(&self.matrix)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// `min_θ |self - e^{iθ} other|_op`, evaluated at the phase that aligns the traces.
    pub fn phase_aligned_op_distance(&self, other: &Self) -> f64 {
        let overlap = (self.matrix.adjoint() * &other.matrix).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap.conj() / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let diff = &self.matrix - &other.matrix * phase;
        Self { matrix: diff }.op_norm()
    }

    /// Action on a state vector.
    pub fn apply(&self, state: &[C64]) -> Result<Vec<C64>> {
        if state.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: state.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(state);
        Ok((&self.matrix * v).as_slice().to_vec())
    }
}

/// Haar-random unitary of dimension `dim` (QR of a complex Ginibre matrix with
/// the phases of `R`'s diagonal absorbed into `Q`).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Haar-random unitary on `n` qubits.
pub fn random_unitary<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> DenseOperator {
    DenseOperator {
        matrix: haar_unitary(1usize << n_qubits, rng),
    }
}

//! Instance builders shared by the integration tests.

#![allow(dead_code)]

use gaussdim::dense::{DenseOperator, C64};
use gaussdim::gaussian::random_gaussian;
use gaussdim::majorana::majorana_monomial;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

/// `exp(iθ γ_a γ_b γ_c γ_d) = cos θ + i sin θ γ_aγ_bγ_cγ_d`; conjugation
/// scales the four Majoranas' correlation entries by `cos 2θ`.
pub fn quartic_rotation(n: usize, indices: [usize; 4], theta: f64) -> DenseOperator {
    let p = majorana_monomial(n, &indices).unwrap().to_dense();
    let id = DenseOperator::identity(n);
    DenseOperator::unitary(
        id.matrix() * C64::new(theta.cos(), 0.0) + p.matrix() * C64::new(0.0, theta.sin()),
    )
    .unwrap()
}

/// Random Hermitian matrix on `m` qubits that conserves fermion parity.
pub fn random_even_hermitian<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<C64> {
    let d = 1usize << m;
    let a = DMatrix::<C64>::from_fn(d, d, |i, j| {
        if (i.count_ones() + j.count_ones()) % 2 == 0 {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// `exp(iθH)` for Hermitian `H`.
pub fn exp_i(h: &DMatrix<C64>, theta: f64) -> DenseOperator {
    let eig = SymmetricEigen::new(h.clone());
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::from_polar(1.0, theta * x)));
    DenseOperator::unitary(&eig.eigenvectors * phases * eig.eigenvectors.adjoint()).unwrap()
}

/// `G_A (1_{n−m} ⊗ u) G_B†` with random Gaussians on `n` modes.
pub fn gaussian_sandwich<R: Rng + ?Sized>(n: usize, u: &DenseOperator, rng: &mut R) -> DenseOperator {
    let m = u.n_qubits();
    let g_a = random_gaussian(n, rng).unwrap();
    let g_b = random_gaussian(n, rng).unwrap();
    g_a.dense()
        .matmul(&DenseOperator::identity(n - m).kron(u))
        .unwrap()
        .matmul(&g_b.dense().adjoint())
        .unwrap()
}

/// Operator norm of `[a, b]`.
pub fn commutator_norm(a: &DenseOperator, b: &DenseOperator) -> f64 {
    let c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    DenseOperator::from_matrix(c).unwrap().op_norm()
}

/// Random `size × size` matrix with standard normal entries.
pub fn normal_matrix<R: Rng + ?Sized>(size: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(size, size, |_, _| rng.sample(StandardNormal))
}

//! Fixed-seed instances shared by the criterion benches.

use gaussdim::circuit::{random_doped_circuit, DopedCircuit};
use gaussdim::dense::DenseOperator;
use gaussdim::gaussian::{random_orthogonal, OrthogonalMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A doped circuit and its unitary, reproducible from `seed`.
pub fn doped_instance(n: usize, t: usize, kappa: usize, seed: u64) -> (DopedCircuit, DenseOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_doped_circuit(n, t, kappa, &mut rng).expect("valid circuit parameters")
}

/// A Haar-random element of O(2n), reproducible from `seed`.
pub fn orthogonal_instance(n: usize, seed: u64) -> OrthogonalMatrix {
    random_orthogonal(2 * n, &mut ChaCha8Rng::seed_from_u64(seed))
}

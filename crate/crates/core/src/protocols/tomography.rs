//! Recovering the non-Gaussian block `u` from `W ≈ 1 ⊗ u`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::choi::sample_pm_one_mean;
use crate::dense::{DenseOperator, C64};
use crate::error::{Error, Result};
use crate::linalg::complex_svd;
use crate::majorana::PauliTerm;

/// Below this smallest singular value a block is treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;
/// Below this operator norm the traced block carries no usable signal.
pub const DEGENERATE_BLOCK_TOL: f64 = 1e-6;
/// Largest block (in modes) reconstructed by Pauli sampling.
pub const MAX_SAMPLED_MODES: usize = 3;

/// Unitary polar factor of `k`: the unitary closest to `k` in operator norm.
pub fn polar_round(k: &DenseOperator) -> Result<DenseOperator> {
    let svd = complex_svd(k.matrix())?;
    let smallest = svd.s.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest < RANK_TOL {
        return Err(Error::RankDeficient { smallest });
    }
    DenseOperator::from_matrix(svd.u * svd.v.adjoint())
}

/// `Tr_{first j qubits}(W) / 2^j`.
pub fn traced_block(w: &DenseOperator, traced: usize) -> Result<DenseOperator> {
    let k = w.reduce_leading(traced)?;
    let norm = k.op_norm();
    if norm < DEGENERATE_BLOCK_TOL {
        return Err(Error::DegenerateBlock { norm });
    }
    Ok(k)
}

/// Normalized Choi matrix of `ρ ↦ Tr_first(W (1/2^j ⊗ ρ) W†)`.
pub fn block_channel_choi(w: &DenseOperator, traced: usize) -> Result<DMatrix<C64>> {
    let n = w.n_qubits();
    if traced > n {
        return Err(Error::InvalidParameter(format!("cannot trace {traced} of {n} qubits")));
    }
    let d = 1usize << (n - traced);
    let blocks = 1usize << traced;
    let mut choi = DMatrix::<C64>::zeros(d * d, d * d);
    for p in 0..blocks {
        for q in 0..blocks {
            let kraus = w.matrix().view((p * d, q * d), (d, d));
            // row-major flattening: (A ⊗ 1)|Ω⟩ √d = Σ A_il |i⟩|l⟩
            let v = nalgebra::DVector::from_fn(d * d, |idx, _| kraus[(idx / d, idx % d)]);
            choi += &v * v.adjoint();
        }
    }
    Ok(choi / C64::new((blocks * d) as f64, 0.0))
}

/// Normalized Choi matrix `vec(u) vec(u)† / d` of a unitary channel.
pub fn unitary_choi(u: &DenseOperator) -> DMatrix<C64> {
    let d = u.dim();
    let v = nalgebra::DVector::from_fn(d * d, |idx, _| u.matrix()[(idx / d, idx % d)]);
    (&v * v.adjoint()) / C64::new(d as f64, 0.0)
}

fn trace_norm_hermitian(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().map(|x| x.abs()).sum()
}

/// Budget of the Pauli-sampling reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingBudget {
    /// Per-expectation accuracy; `8^m η` bounds the diamond error of the estimate.
    pub eta: f64,
    pub shots_per_pauli: u64,
    pub pauli_pairs: u64,
}

impl SamplingBudget {
    /// Accuracy `target / 8^m` for each of the `16^m` expectations, failure
    /// probability `delta` split by a union bound (Hoeffding per expectation).
    pub fn new(modes: usize, target: f64, delta: f64) -> Result<Self> {
        if modes > MAX_SAMPLED_MODES {
            return Err(Error::DimensionGuard {
                n: modes,
                max: MAX_SAMPLED_MODES,
            });
        }
        if !(target > 0.0 && delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sampling target {target} and failure probability {delta} out of range"
            )));
        }
        let pairs = 1u64 << (4 * modes);
        let eta = target / 8f64.powi(modes as i32);
        let shots = (2.0 * (2.0 * pairs as f64 / delta).ln() / (eta * eta)).ceil();
        if shots >= u64::MAX as f64 {
            return Err(Error::ShotOverflow(shots as u128));
        }
        Ok(Self {
            eta,
            shots_per_pauli: shots as u64,
            pauli_pairs: pairs,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SampledBlock {
    pub unitary: DenseOperator,
    pub choi_estimate: DMatrix<C64>,
    pub budget: SamplingBudget,
    /// `d · ‖Ĵ − J(ũ)‖₁`: distance of the rounded unitary from the reconstructed channel.
    pub residual: f64,
}

fn pauli_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    // keep clear of the low streams used by the correlation estimator
    rng.set_stream((1u64 << 48) + index);
    rng
}

/// Reconstructs the traced channel from sampled Pauli expectations of its Choi
/// state and returns the polar-rounded dominant Kraus operator.
pub fn sampled_block(
    w: &DenseOperator,
    traced: usize,
    budget: SamplingBudget,
    master_seed: u64,
) -> Result<SampledBlock> {
    let m = w.n_qubits() - traced;
    if m == 0 {
        // nothing left to learn: the block is a global phase
        return Ok(SampledBlock {
            unitary: DenseOperator::identity(0),
            choi_estimate: DMatrix::identity(1, 1),
            budget,
            residual: 0.0,
        });
    }
    let d = 1usize << m;
    let dd = d * d;
    let choi = block_channel_choi(w, traced)?;
    let mut estimate = DMatrix::<C64>::zeros(dd, dd);
    let words = 1u64 << (2 * m);
    for x in 0..words {
        for z in 0..words {
            let term = PauliTerm::new(2 * m, x, z, 0)?;
            let mut exact = C64::new(0.0, 0.0);
            for j in 0..dd {
                let (row, coeff) = term.column(j);
                exact += coeff * choi[(j, row)];
            }
            let value = if x == 0 && z == 0 {
                1.0
            } else {
                let mut rng = pauli_rng(master_seed, x * words + z);
                sample_pm_one_mean(exact.re, budget.shots_per_pauli, &mut rng)
            };
            let scale = C64::new(value / dd as f64, 0.0);
            for j in 0..dd {
                let (row, coeff) = term.column(j);
                estimate[(row, j)] += coeff * scale;
            }
        }
    }
    let eig = SymmetricEigen::new(estimate.clone());
    let top = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    let v = eig.eigenvectors.column(top);
    let k = DMatrix::from_fn(d, d, |i, l| v[i * d + l] * (d as f64).sqrt());
    let unitary = polar_round(&DenseOperator::from_matrix(k)?)?;
    let residual = d as f64 * trace_norm_hermitian(&(&estimate - unitary_choi(&unitary)));
    Ok(SampledBlock {
        unitary,
        choi_estimate: estimate,
        budget,
        residual,
    })
}

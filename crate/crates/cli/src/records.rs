//! JSON records written by the CLI. Each carries a `schema` tag matching a
//! file under `crates/cli/schema/`.

use gaussdim::circuit::{complex_rows, matrix_from_complex_rows, GaussianRecord};
use gaussdim::protocols::{HybridResiduals, LearnedDecomposition, LearnerWarning};
use gaussdim::{DenseOperator, ShotPolicy, TesterVerdict};
use serde::{Deserialize, Serialize};

pub const SIDECAR_SCHEMA: &str = "gaussdim.sidecar/v1";
pub const RESULT_SCHEMA: &str = "gaussdim.result/v1";
pub const BENCH_SCHEMA: &str = "gaussdim.bench/v1";

/// Written next to a generated circuit.
#[derive(Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema: String,
    pub n: usize,
    pub t: usize,
    pub kappa: usize,
    pub seed: u64,
    pub claimed_dimension: usize,
    /// Exact singular values of the correlation matrix, non-increasing.
    pub singular_values: Vec<f64>,
    pub unit_singular_values: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub path: String,
    pub n: usize,
    pub claimed_dimension: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Distances {
    pub frobenius: f64,
    pub diamond: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    pub sigma: Vec<f64>,
    pub k_prime: Option<usize>,
    pub warnings: Vec<LearnerWarning>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hybrid: Option<HybridResiduals>,
}

/// The learner's output as a circuit-level certificate: `Ĝ_B†`, then
/// `1 ⊗ ũ`, then `Ĝ_A`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub k_prime: usize,
    pub identity_modes: usize,
    pub t: usize,
    pub alpha: f64,
    pub policy: ShotPolicy,
    pub g_b: GaussianRecord,
    pub u_tilde: Vec<Vec<[f64; 2]>>,
    pub g_a: GaussianRecord,
    pub tomography_residual: Option<f64>,
}

impl Decomposition {
    pub fn from_learned(learned: &LearnedDecomposition) -> Self {
        Self {
            k_prime: learned.k_prime,
            identity_modes: learned.identity_modes(),
            t: learned.t,
            alpha: learned.alpha,
            policy: learned.policy,
            g_b: GaussianRecord::from_unitary(&learned.g_b_hat),
            u_tilde: complex_rows(learned.u_tilde.matrix()),
            g_a: GaussianRecord::from_unitary(&learned.g_a_hat),
            tomography_residual: learned.tomography_residual,
        }
    }

    /// `Ũ = Ĝ_A (1 ⊗ ũ) Ĝ_B†`.
    pub fn assemble(&self) -> gaussdim::Result<DenseOperator> {
        let g_a = self.g_a.to_unitary()?;
        let g_b = self.g_b.to_unitary()?;
        let u_tilde = DenseOperator::unitary(matrix_from_complex_rows(&self.u_tilde)?)?;
        let middle = DenseOperator::identity(self.identity_modes).kron(&u_tilde);
        g_a.dense().matmul(&middle)?.matmul(&g_b.dense().adjoint())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: String,
    pub command: String,
    pub instance: Instance,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<TesterVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decomposition: Option<Decomposition>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distances: Option<Distances>,
    pub diagnostics: Diagnostics,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl ResultRecord {
    /// Warnings that should turn the exit status to 2.
    pub fn has_promise_warning(&self) -> bool {
        self.diagnostics.warnings.iter().any(LearnerWarning::is_promise_signal)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Percentiles {
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
}

impl Percentiles {
    /// Nearest-rank percentiles; `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let rank = |q: f64| sorted[((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1];
        Some(Self {
            p50: rank(0.5),
            p90: rank(0.9),
            p99: rank(0.99),
            max: sorted[sorted.len() - 1],
        })
    }
}

/// One repetition of a bench run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Repetition {
    pub index: usize,
    pub seed: u64,
    pub success: bool,
    /// Diamond distance for learn runs, `σ_k(M̂)` for test runs.
    pub score: f64,
    pub k_prime: Option<usize>,
    pub warnings: usize,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema: String,
    pub mode: String,
    pub config: serde_json::Value,
    pub repetitions: usize,
    pub success_rate: f64,
    pub score: Option<Percentiles>,
    pub wall_time_ms: Option<Percentiles>,
    pub runs: Vec<Repetition>,
    pub seed: u64,
    pub total_wall_time_ms: u64,
}

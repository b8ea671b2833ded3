//! Learner for unitaries of high Gaussian dimension, and the verification
//! harness that splits its error along the hybrid chain
//! `U → U′ = G_A(1⊗u′)G_B† → Ũ = Ĝ_A(1⊗ũ)Ĝ_B†`.

use serde::{Deserialize, Serialize};

use crate::choi::{estimate_correlation_matrix, learner_alpha, ShotPolicy};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::gaussian::{
    correlation_matrix_exact, synthesize_gaussian, unit_singular_value_count, GaussianUnitary,
};
use crate::metrics::{diamond_distance_unitaries, distance_report, DistanceReport};
use crate::spectral::{matched_exact_factors, orthogonal_svd, partition_singular_values, PartitionResult};

use super::tomography::{polar_round, sampled_block, traced_block, SamplingBudget};

/// The constant in `α` that the accuracy guarantee is proven for.
pub const PROVEN_C: f64 = 180_000.0;
/// Tolerance for counting unit singular values of an assembled output.
pub const PROPERNESS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TomographyMode {
    /// Normalized partial trace followed by polar rounding.
    #[default]
    Exact,
    /// Pauli-sampled Choi reconstruction to diamond accuracy `ε/9`, failure `δ/2`.
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    /// `None` selects the surrogate policy at the configured `α`.
    pub policy: Option<ShotPolicy>,
    pub tomography: TomographyMode,
}

impl LearnerConfig {
    pub fn new(k: usize, epsilon: f64, delta: f64) -> Self {
        Self {
            k,
            epsilon,
            delta,
            c: PROVEN_C,
            policy: None,
            tomography: TomographyMode::Exact,
        }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn with_policy(self, policy: ShotPolicy) -> Self {
        Self {
            policy: Some(policy),
            ..self
        }
    }

    pub fn with_tomography(self, tomography: TomographyMode) -> Self {
        Self { tomography, ..self }
    }

    /// Runs with `C` below the proven constant carry no accuracy guarantee.
    pub fn heuristic_constants(&self) -> bool {
        self.c < PROVEN_C
    }

    /// Non-Gaussian Majorana budget `t = 2(n − ⌊k/2⌋)`.
    pub fn t(&self, n: usize) -> usize {
        2 * (n - self.k / 2)
    }

    pub fn alpha(&self, n: usize) -> f64 {
        learner_alpha(n, self.t(n), self.epsilon, self.c)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k > 2 * n {
            return Err(Error::InvalidParameter(format!(
                "k = {} exceeds 2n = {}",
                self.k,
                2 * n
            )));
        }
        for (name, x) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {x} must lie in (0, 1)")));
            }
        }
        if !(self.c >= 1.0) {
            return Err(Error::InvalidParameter(format!("C = {} must be at least 1", self.c)));
        }
        if let Some(p) = self.policy {
            p.validate()?;
        }
        Ok(())
    }

    pub fn resolve_policy(&self, n: usize) -> ShotPolicy {
        self.policy.unwrap_or(ShotPolicy::GaussianSurrogate {
            alpha: self.alpha(n),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LearnerWarning {
    /// `σ_k(M̂)` missed its threshold: the promise fails or the noise is too large.
    PartitionClamp { shortfall: f64 },
    /// The sampled block is further than `ε/9` from the reconstructed channel.
    TomographyResidual { residual: f64, limit: f64 },
    /// `C` is below the proven constant.
    HeuristicConstants { c: f64 },
}

impl LearnerWarning {
    /// Signals a possible promise violation, as opposed to a label on the run.
    pub fn is_promise_signal(&self) -> bool {
        !matches!(self, LearnerWarning::HeuristicConstants { .. })
    }
}

#[derive(Clone, Debug)]
pub struct LearnedDecomposition {
    pub g_a_hat: GaussianUnitary,
    pub g_b_hat: GaussianUnitary,
    /// Block on the trailing `n − ⌊k′/2⌋` modes.
    pub u_tilde: DenseOperator,
    pub k_prime: usize,
    pub t: usize,
    pub alpha: f64,
    pub policy: ShotPolicy,
    pub sigma_hat: Vec<f64>,
    pub partition: PartitionResult,
    pub tomography_residual: Option<f64>,
    pub warnings: Vec<LearnerWarning>,
}

impl LearnedDecomposition {
    pub fn modes(&self) -> usize {
        self.g_a_hat.modes()
    }

    /// Leading modes on which the middle block acts trivially.
    pub fn identity_modes(&self) -> usize {
        self.k_prime / 2
    }

    /// `1_{⌊k′/2⌋} ⊗ ũ`.
    pub fn middle(&self) -> DenseOperator {
        DenseOperator::identity(self.identity_modes()).kron(&self.u_tilde)
    }

    /// `Ũ = Ĝ_A (1 ⊗ ũ) Ĝ_B†`.
    pub fn assemble(&self) -> Result<DenseOperator> {
        self.g_a_hat
            .dense()
            .matmul(&self.middle())?
            .matmul(&self.g_b_hat.dense().adjoint())
    }
}

/// Runs the learner on `u`.
pub fn learn(u: &DenseOperator, cfg: &LearnerConfig, seed: u64) -> Result<LearnedDecomposition> {
    let n = u.n_qubits();
    cfg.validate(n)?;
    let t = cfg.t(n);
    let alpha = cfg.alpha(n);
    let policy = cfg.resolve_policy(n);
    let estimate = estimate_correlation_matrix(u, policy, seed)?;
    let svd = orthogonal_svd(&estimate.matrix)?;
    let g_a_hat = synthesize_gaussian(&svd.v_a)?;
    let g_b_hat = synthesize_gaussian(&svd.v_b)?;
    let partition = partition_singular_values(&svd.sigma, cfg.k, cfg.epsilon, t);
    let mut warnings = Vec::new();
    if cfg.heuristic_constants() {
        warnings.push(LearnerWarning::HeuristicConstants { c: cfg.c });
    }
    if partition.clamped {
        warnings.push(LearnerWarning::PartitionClamp {
            shortfall: partition.shortfall(&svd.sigma),
        });
    }
    let traced = partition.k_prime / 2;
    let w = g_a_hat.dense().adjoint().matmul(u)?.matmul(g_b_hat.dense())?;
    let (u_tilde, tomography_residual) = match cfg.tomography {
        TomographyMode::Exact => (polar_round(&traced_block(&w, traced)?)?, None),
        TomographyMode::Sampled => {
            let limit = cfg.epsilon / 9.0;
            let budget = SamplingBudget::new(n - traced, limit, cfg.delta / 2.0)?;
            let block = sampled_block(&w, traced, budget, seed)?;
            if block.residual > limit {
                warnings.push(LearnerWarning::TomographyResidual {
                    residual: block.residual,
                    limit,
                });
            }
            (block.unitary, Some(block.residual))
        }
    };
    Ok(LearnedDecomposition {
        g_a_hat,
        g_b_hat,
        u_tilde,
        k_prime: partition.k_prime,
        t,
        alpha,
        policy,
        sigma_hat: svd.sigma,
        partition,
        tomography_residual,
        warnings,
    })
}

/// The learner's exact path at a forced `k′`: exact SVD, exact Gaussians,
/// partial trace, polar rounding. Returns `U′ = G_A (1 ⊗ u′) G_B†`.
pub fn exact_rounding(u: &DenseOperator, k_prime: usize) -> Result<DenseOperator> {
    let n = u.n_qubits();
    if k_prime > 2 * n {
        return Err(Error::InvalidParameter(format!("k′ = {k_prime} exceeds 2n = {}", 2 * n)));
    }
    let svd = orthogonal_svd(&correlation_matrix_exact(u)?)?;
    let g_a = synthesize_gaussian(&svd.v_a)?;
    let g_b = synthesize_gaussian(&svd.v_b)?;
    let w = g_a.dense().adjoint().matmul(u)?.matmul(g_b.dense())?;
    let u_prime = polar_round(&traced_block(&w, k_prime / 2)?)?;
    g_a.dense()
        .matmul(&DenseOperator::identity(k_prime / 2).kron(&u_prime))?
        .matmul(&g_b.dense().adjoint())
}

/// Diamond-distance terms of the hybrid chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridResiduals {
    /// `d⋄(U, U′)` with `U′` rounded through exact-SVD Gaussians matched to `Ĝ`.
    pub rounding: f64,
    /// `d⋄(G_A, Ĝ_A)`.
    pub gaussian_a: f64,
    /// `d⋄(G_B, Ĝ_B)`.
    pub gaussian_b: f64,
    /// `d⋄(u′, ũ)`.
    pub block: f64,
    /// Sum of the four terms; bounds `d⋄(U, Ũ)`.
    pub chain_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningReport {
    pub distances: DistanceReport,
    pub hybrid: Option<HybridResiduals>,
    /// Unit singular values of the exact correlation matrix of `Ũ`.
    pub output_unit_singular_values: usize,
    /// At least `2⌊k′/2⌋` of them.
    pub proper: bool,
}

fn hybrid_residuals(u: &DenseOperator, learned: &LearnedDecomposition) -> Result<HybridResiduals> {
    let exact = correlation_matrix_exact(u)?;
    let (v_a, v_b) = matched_exact_factors(
        &exact,
        learned.g_a_hat.target().matrix(),
        learned.g_b_hat.target().matrix(),
        learned.k_prime,
    )?;
    let g_a = synthesize_gaussian(&v_a)?;
    let g_b = synthesize_gaussian(&v_b)?;
    let traced = learned.identity_modes();
    let w = g_a.dense().adjoint().matmul(u)?.matmul(g_b.dense())?;
    let u_prime = polar_round(&traced_block(&w, traced)?)?;
    let rounded = g_a
        .dense()
        .matmul(&DenseOperator::identity(traced).kron(&u_prime))?
        .matmul(&g_b.dense().adjoint())?;
    let rounding = diamond_distance_unitaries(u, &rounded)?;
    let gaussian_a = diamond_distance_unitaries(g_a.dense(), learned.g_a_hat.dense())?;
    let gaussian_b = diamond_distance_unitaries(g_b.dense(), learned.g_b_hat.dense())?;
    let block = diamond_distance_unitaries(&u_prime, &learned.u_tilde)?;
    Ok(HybridResiduals {
        rounding,
        gaussian_a,
        gaussian_b,
        block,
        chain_bound: rounding + gaussian_a + gaussian_b + block,
    })
}

/// Compares the assembled `Ũ` with `U`. The hybrid split needs a nondegenerate
/// traced block of the exact-factor sandwich and is `None` when that fails.
pub fn verify_learning(u: &DenseOperator, learned: &LearnedDecomposition) -> Result<LearningReport> {
    let assembled = learned.assemble()?;
    let with_choi = u.n_qubits() <= crate::choi::MAX_CHOI_MODES;
    let distances = distance_report(u, &assembled, with_choi)?;
    let hybrid = hybrid_residuals(u, learned).ok();
    let units = unit_singular_value_count(&correlation_matrix_exact(&assembled)?, PROPERNESS_TOL);
    Ok(LearningReport {
        distances,
        hybrid,
        output_unit_singular_values: units,
        proper: units >= 2 * learned.identity_modes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_doped_circuit;
    use crate::dense::C64;
    use crate::gaussian::random_gaussian;
    use crate::metrics::frobenius_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact_cfg(k: usize) -> LearnerConfig {
        LearnerConfig::new(k, 0.2, 0.1).with_policy(ShotPolicy::Exact)
    }

    #[test]
    fn gaussian_input_is_learned_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_gaussian(3, &mut rng).unwrap();
        let learned = learn(g.dense(), &exact_cfg(6), 0).unwrap();
        assert_eq!(learned.k_prime, 6);
        assert_eq!(learned.u_tilde.dim(), 1);
        assert!((learned.u_tilde.trace().norm() - 1.0).abs() < 1e-12);
        let report = verify_learning(g.dense(), &learned).unwrap();
        assert!(report.distances.diamond <= 1e-6);
        assert!(report.proper);
    }

    #[test]
    fn doped_input_is_learned_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let (circuit, u) = random_doped_circuit(4, 1, 2, &mut rng).unwrap();
            let learned = learn(&u, &exact_cfg(circuit.claimed_dimension()), 0).unwrap();
            assert!(learned.k_prime >= 4);
            let report = verify_learning(&u, &learned).unwrap();
            assert!(report.distances.diamond <= 1e-6, "{}", report.distances.diamond);
            assert!(report.proper);
            let hybrid = report.hybrid.unwrap();
            assert!(report.distances.diamond <= hybrid.chain_bound + 1e-9);
        }
    }

    #[test]
    fn corrupted_block_moves_distance_by_block_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (circuit, u) = random_doped_circuit(3, 1, 1, &mut rng).unwrap();
        let mut learned = learn(&u, &exact_cfg(circuit.claimed_dimension()), 0).unwrap();
        let clean = learned.u_tilde.clone();
        let m = clean.n_qubits();
        let mut phase = nalgebra::DMatrix::<C64>::identity(1 << m, 1 << m);
        phase[(0, 0)] = C64::from_polar(1.0, 0.3);
        let rot = DenseOperator::unitary(phase).unwrap();
        learned.u_tilde = clean.matmul(&rot).unwrap();
        let report = verify_learning(&u, &learned).unwrap();
        let block = diamond_distance_unitaries(&learned.u_tilde, &clean).unwrap();
        assert!((report.distances.diamond - block).abs() < 1e-6);
    }

    #[test]
    fn surrogate_noise_stays_within_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (circuit, u) = random_doped_circuit(3, 1, 1, &mut rng).unwrap();
        let cfg = LearnerConfig::new(circuit.claimed_dimension(), 0.2, 0.1).with_c(10.0);
        let learned = learn(&u, &cfg, 9).unwrap();
        assert!(learned.warnings.contains(&LearnerWarning::HeuristicConstants { c: 10.0 }));
        let report = verify_learning(&u, &learned).unwrap();
        assert!(report.distances.diamond <= 0.2);
    }

    #[test]
    fn sampled_tomography_stays_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (circuit, u) = random_doped_circuit(4, 1, 2, &mut rng).unwrap();
        let cfg = exact_cfg(circuit.claimed_dimension()).with_tomography(TomographyMode::Sampled);
        let learned = learn(&u, &cfg, 3).unwrap();
        assert!(learned.u_tilde.n_qubits() >= 1);
        let report = verify_learning(&u, &learned).unwrap();
        assert!(report.distances.diamond <= 0.2 / 9.0);
        assert!(learned.tomography_residual.unwrap() <= 0.2 / 9.0);
    }

    #[test]
    fn rounding_of_gaussian_times_phase_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_gaussian(2, &mut rng).unwrap();
        let u = g.dense().scale(C64::from_polar(1.0, 0.8));
        let rounded = exact_rounding(&u, 4).unwrap();
        assert!(frobenius_distance(&u, &rounded).unwrap() < 1e-7);
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = LearnerConfig::new(4, 0.25, 0.1).with_c(10.0);
        assert_eq!(cfg.t(4), 4);
        // 0.25³ / (10 · 8 · 20 · 4)
        assert!((cfg.alpha(4) - 0.015625 / 6400.0).abs() < 1e-18);
        assert!(cfg.heuristic_constants());
        assert!(!LearnerConfig::new(4, 0.25, 0.1).heuristic_constants());
        assert!(LearnerConfig::new(9, 0.25, 0.1).validate(4).is_err());
        assert!(cfg.with_c(0.5).validate(4).is_err());
    }
}

//! Property tester: does `U` have Gaussian dimension at least `k`, or is it
//! `ε`-far in Frobenius distance from every such unitary?

use serde::{Deserialize, Serialize};

use crate::choi::{estimate_correlation_matrix, shots_for_tester, ShotPolicy};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::gaussian::singular_values;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// `None` selects binomial sampling with the tester's shot count.
    pub policy: Option<ShotPolicy>,
}

impl TesterConfig {
    pub fn new(k: usize, epsilon: f64, delta: f64) -> Self {
        Self {
            k,
            epsilon,
            delta,
            policy: None,
        }
    }

    pub fn with_policy(self, policy: ShotPolicy) -> Self {
        Self {
            policy: Some(policy),
            ..self
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > 2 * n {
            return Err(Error::InvalidParameter(format!(
                "k = {} must lie in 1..={}",
                self.k,
                2 * n
            )));
        }
        for (name, x) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {x} must lie in (0, 1)")));
            }
        }
        if let Some(p) = self.policy {
            p.validate()?;
        }
        Ok(())
    }

    /// The policy actually used on an `n`-mode input.
    pub fn resolve_policy(&self, n: usize) -> Result<ShotPolicy> {
        match self.policy {
            Some(p) => Ok(p),
            None => ShotPolicy::binomial(shots_for_tester(n, self.k, self.epsilon, self.delta)?),
        }
    }

    /// Acceptance threshold `1 − ε²/(8k)`.
    pub fn threshold(&self) -> f64 {
        1.0 - self.epsilon * self.epsilon / (8.0 * self.k as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterVerdict {
    pub accept: bool,
    pub sigma_k_hat: f64,
    pub threshold: f64,
    pub shots_used: u128,
    pub policy: ShotPolicy,
    pub sigma_hat: Vec<f64>,
}

/// Estimates `M̂`, and accepts iff `σ_k(M̂) ≥ 1 − ε²/(8k)`.
pub fn test_dimension(u: &DenseOperator, cfg: &TesterConfig, seed: u64) -> Result<TesterVerdict> {
    let n = u.n_qubits();
    cfg.validate(n)?;
    let policy = cfg.resolve_policy(n)?;
    let estimate = estimate_correlation_matrix(u, policy, seed)?;
    let sigma_hat = singular_values(&estimate.matrix);
    let sigma_k_hat = sigma_hat[cfg.k - 1];
    let threshold = cfg.threshold();
    Ok(TesterVerdict {
        accept: sigma_k_hat >= threshold,
        sigma_k_hat,
        threshold,
        shots_used: policy.total_shots(n),
        policy,
        sigma_hat,
    })
}

//! Fermionic Choi states and shot-based correlation-matrix estimation.
//!
//! The Choi register holds `2n` qubits: the system modes on the leading `n`
//! qubits and the reference modes on the trailing `n`. Reference modes come
//! first in the Jordan–Wigner order, so
//!
//! * system Majorana `a ∈ 1..=2n` is `γ_a ⊗ Z^{⊗n}`,
//! * reference Majorana `2n + b` is `1 ⊗ γ_b`.
//!
//! With this ordering `U ⊗ 1` commutes with every reference Majorana for any
//! unitary `U`, parity-conserving or not. The EPR state is the joint `+1`
//! eigenvector of `−i γ_a γ_{2n+a}` for all `a`, which makes
//! `⟨−i γ_a γ_{2n+b}⟩ = M_ab` on `(U ⊗ 1)|σ⟩`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, C64};
use crate::error::{Error, Result};
use crate::gaussian::correlation_matrix_exact;
use crate::majorana::{majorana, PauliTerm};

/// Largest mode count for dense Choi objects (`4^n ≤ 4096`).
pub const MAX_CHOI_MODES: usize = 6;

/// Pure Choi vector of an `n`-mode unitary.
#[derive(Clone, Debug)]
pub struct ChoiState {
    n: usize,
    vector: Vec<C64>,
}

impl ChoiState {
    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    /// `⟨−i γ_a γ_{2n+b}⟩`, 1-based `a, b ∈ 1..=2n`.
    pub fn two_point(&self, a: usize, b: usize) -> Result<f64> {
        let op = two_point_operator(self.n, a, b)?;
        let value = op.expectation(&self.vector)?;
        Ok(value.re)
    }

    /// The full `2n × 2n` matrix of two-point expectations.
    pub fn two_point_matrix(&self) -> Result<DMatrix<f64>> {
        let size = 2 * self.n;
        let mut m = DMatrix::zeros(size, size);
        for a in 1..=size {
            for b in 1..=size {
                m[(a - 1, b - 1)] = self.two_point(a, b)?;
            }
        }
        Ok(m)
    }

    /// `tr(σ_U σ_V) = |⟨σ_U|σ_V⟩|²`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let inner: C64 = self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(x, y)| x.conj() * y)
            .sum();
        Ok(inner.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// System Majorana `a` on the Choi register.
pub fn choi_system_majorana(n: usize, a: usize) -> Result<PauliTerm> {
    let parity = PauliTerm::new(n, 0, (1u64 << n) - 1, 0)?;
    majorana(n, a)?.tensor(&parity)
}

/// Reference Majorana `2n + b` on the Choi register.
pub fn choi_reference_majorana(n: usize, b: usize) -> Result<PauliTerm> {
    PauliTerm::identity(n).tensor(&majorana(n, b)?)
}

/// `−i γ_a γ_{2n+b}` on the Choi register.
pub fn two_point_operator(n: usize, a: usize, b: usize) -> Result<PauliTerm> {
    let s = choi_system_majorana(n, a)?;
    let r = choi_reference_majorana(n, b)?;
    Ok(s.multiply(&r)?.with_phase(3))
}

fn check_guard(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CHOI_MODES {
        return Err(Error::DimensionGuard {
            n,
            max: MAX_CHOI_MODES,
        });
    }
    Ok(())
}

/// The fermionic EPR vector `|σ⟩` on `2n` modes.
pub fn epr_state(n: usize) -> Result<Vec<C64>> {
    check_guard(n)?;
    let dim = 1usize << (2 * n);
    let stabilizers: Vec<PauliTerm> = (1..=2 * n)
        .map(|a| two_point_operator(n, a, a))
        .collect::<Result<_>>()?;
    // Project basis vectors with Π (1 + S_a)/2 until one survives; Π is rank one.
    for seed in 0..dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[seed] = C64::new(1.0, 0.0);
        for s in &stabilizers {
            let sv = s.apply(&v)?;
            for (x, y) in v.iter_mut().zip(sv) {
                *x = (*x + y) * 0.5;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            // fix the global phase: largest component real positive
            let pivot = v
                .iter()
                .copied()
                .max_by(|x, y| x.norm().total_cmp(&y.norm()))
                .unwrap_or(C64::new(1.0, 0.0));
            let phase = pivot.conj() / pivot.norm();
            return Ok(v.into_iter().map(|z| z * phase / norm).collect());
        }
    }
    Err(Error::Eigen("EPR projector annihilated every basis vector".into()))
}

/// `(U ⊗ 1)|σ⟩`.
pub fn build_choi_state(u: &DenseOperator) -> Result<ChoiState> {
    let n = u.n_qubits();
    check_guard(n)?;
    let epr = epr_state(n)?;
    let d = 1usize << n;
    // Row-major reshape: system index is the high half of the basis index.
    let psi = DMatrix::from_row_slice(d, d, &epr);
    let out = u.matrix() * psi;
    let mut vector = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            vector.push(out[(i, j)]);
        }
    }
    Ok(ChoiState { n, vector })
}

// ---------------------------------------------------------------------------
// estimation

/// How correlation-matrix entries are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ShotPolicy {
    /// The exact correlation matrix.
    Exact,
    /// `shots_per_entry` ±1 measurements per entry, aggregated into one binomial draw.
    Binomial { shots_per_entry: u64 },
    /// Exact matrix plus i.i.d. normal noise of standard deviation `α/(3√n)`.
    GaussianSurrogate { alpha: f64 },
}

impl ShotPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ShotPolicy::Exact => Ok(()),
            ShotPolicy::Binomial { shots_per_entry } if shots_per_entry == 0 => Err(
                Error::InvalidPolicy("binomial mode needs at least one shot per entry".into()),
            ),
            ShotPolicy::Binomial { .. } => Ok(()),
            ShotPolicy::GaussianSurrogate { alpha } if !(alpha > 0.0 && alpha < 1.0) => Err(
                Error::InvalidPolicy(format!("surrogate error α = {alpha} must lie in (0, 1)")),
            ),
            ShotPolicy::GaussianSurrogate { .. } => Ok(()),
        }
    }

    /// Binomial policy from a possibly huge shot count.
    pub fn binomial(shots: u128) -> Result<Self> {
        let shots_per_entry = u64::try_from(shots).map_err(|_| Error::ShotOverflow(shots))?;
        let policy = ShotPolicy::Binomial { shots_per_entry };
        policy.validate()?;
        Ok(policy)
    }

    /// Total number of state preparations for a `2n × 2n` estimate.
    pub fn total_shots(&self, n: usize) -> u128 {
        match self {
            ShotPolicy::Binomial { shots_per_entry } => {
                *shots_per_entry as u128 * (2 * n * 2 * n) as u128
            }
            _ => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorrelationEstimate {
    pub matrix: DMatrix<f64>,
    pub policy: ShotPolicy,
    pub master_seed: u64,
}

/// Independent RNG stream for entry `(a, b)` (0-based) of an estimate.
pub fn entry_rng(master_seed: u64, size: usize, a: usize, b: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((a * size + b) as u64);
    rng
}

/// `2·B/m − 1` with `B ~ Binomial(m, (1 + value)/2)`.
pub fn sample_pm_one_mean<R: Rng + ?Sized>(value: f64, shots: u64, rng: &mut R) -> f64 {
    let p = ((1.0 + value) / 2.0).clamp(0.0, 1.0);
    let successes = Binomial::new(shots, p)
        .expect("probability clamped to [0, 1]")
        .sample(rng);
    2.0 * successes as f64 / shots as f64 - 1.0
}

/// Estimates the correlation matrix of `u` under `policy`.
pub fn estimate_correlation_matrix(
    u: &DenseOperator,
    policy: ShotPolicy,
    master_seed: u64,
) -> Result<CorrelationEstimate> {
    policy.validate()?;
    let n = u.n_qubits();
    let size = 2 * n;
    let matrix = match policy {
        ShotPolicy::Exact => correlation_matrix_exact(u)?,
        ShotPolicy::Binomial { shots_per_entry } => {
            let choi = build_choi_state(u)?;
            let mut m = DMatrix::zeros(size, size);
            for a in 0..size {
                for b in 0..size {
                    let value = choi.two_point(a + 1, b + 1)?;
                    let mut rng = entry_rng(master_seed, size, a, b);
                    m[(a, b)] = sample_pm_one_mean(value, shots_per_entry, &mut rng);
                }
            }
            m
        }
        ShotPolicy::GaussianSurrogate { alpha } => {
            let exact = correlation_matrix_exact(u)?;
            let normal = Normal::new(0.0, alpha / (3.0 * (n as f64).sqrt()))
                .map_err(|e| Error::InvalidPolicy(e.to_string()))?;
            DMatrix::from_fn(size, size, |a, b| {
                let mut rng = entry_rng(master_seed, size, a, b);
                exact[(a, b)] + normal.sample(&mut rng)
            })
        }
    };
    Ok(CorrelationEstimate {
        matrix,
        policy,
        master_seed,
    })
}

/// Same as [`estimate_correlation_matrix`] but starting from a known
/// correlation matrix (entries are the exact two-point expectations).
pub fn estimate_from_exact(
    exact: &DMatrix<f64>,
    policy: ShotPolicy,
    master_seed: u64,
) -> Result<DMatrix<f64>> {
    policy.validate()?;
    let size = exact.nrows();
    let n = size / 2;
    Ok(match policy {
        ShotPolicy::Exact => exact.clone(),
        ShotPolicy::Binomial { shots_per_entry } => DMatrix::from_fn(size, size, |a, b| {
            let mut rng = entry_rng(master_seed, size, a, b);
            sample_pm_one_mean(exact[(a, b)], shots_per_entry, &mut rng)
        }),
        ShotPolicy::GaussianSurrogate { alpha } => {
            let normal = Normal::new(0.0, alpha / (3.0 * (n as f64).sqrt()))
                .map_err(|e| Error::InvalidPolicy(e.to_string()))?;
            DMatrix::from_fn(size, size, |a, b| {
                let mut rng = entry_rng(master_seed, size, a, b);
                exact[(a, b)] + normal.sample(&mut rng)
            })
        }
    })
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {x} must lie in (0, 1)")))
    }
}

/// Per-entry shots of the tester: `⌈243 n k² ln(2n/δ) / ε⁴⌉`.
pub fn shots_for_tester(n: usize, k: usize, epsilon: f64, delta: f64) -> Result<u128> {
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("n and k must be positive".into()));
    }
    let nf = n as f64;
    let kf = k as f64;
    let m = 243.0 * nf * kf * kf * (2.0 * nf / delta).ln() / epsilon.powi(4);
    Ok(m.ceil() as u128)
}

/// Operator-norm accuracy demanded of the learner's estimate:
/// `α = ε³ / (C n^{3/2} t(t+1) 2^{t/2})`.
pub fn learner_alpha(n: usize, t: usize, epsilon: f64, c: f64) -> f64 {
    let tf = t as f64;
    // t = 0 means the unitary is promised Gaussian; the t-factors collapse to 1
    let t_factor = if t == 0 { 1.0 } else { tf * (tf + 1.0) };
    epsilon.powi(3) / (c * (n as f64).powf(1.5) * t_factor * 2f64.powf(tf / 2.0))
}

/// Per-entry shots of the learner, `⌈3n ln(4n/δ) / α²⌉`, together with `α`.
pub fn shots_for_learner(
    n: usize,
    t: usize,
    epsilon: f64,
    delta: f64,
    c: f64,
) -> Result<(u128, f64)> {
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    if n == 0 || c <= 0.0 {
        return Err(Error::InvalidParameter("n and C must be positive".into()));
    }
    let alpha = learner_alpha(n, t, epsilon, c);
    let nf = n as f64;
    let m = 3.0 * nf * (4.0 * nf / delta).ln() / (alpha * alpha);
    let shots = if m >= u128::MAX as f64 {
        u128::MAX
    } else {
        m.ceil() as u128
    };
    Ok((shots, alpha))
}

/// Bound `2n exp(−m ε² / (3n))` on `Pr[‖M̂ − M‖ > ε]`.
pub fn bernstein_tail(n: usize, shots: f64, epsilon: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf * (-shots * epsilon * epsilon / (3.0 * nf)).exp()
}

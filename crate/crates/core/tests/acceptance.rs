//! Acceptance suite: one line per criterion, run with `cargo test --test acceptance`.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail on mathematical
//! grounds; the binary exits nonzero only when a criterion's outcome differs
//! from its expectation.

mod common;

use std::time::{Duration, Instant};

use gaussdim::choi::{build_choi_state, shots_for_tester, ShotPolicy};
use gaussdim::circuit::random_doped_circuit;
use gaussdim::dense::{random_unitary, DenseOperator, C64};
use gaussdim::gaussian::{
    conjugation_residual, correlation_matrix_exact, random_gaussian, random_orthogonal, singular_values,
    synthesize_gaussian, unit_singular_value_count, OrthogonalMatrix,
};
use gaussdim::majorana::{hs_inner, majoranas};
use gaussdim::metrics::{
    choi_overlap, diamond_distance_unitaries, diamond_lower_bound_search, frobenius_distance,
};
use gaussdim::protocols::{
    exact_rounding, learn, test_dimension, verify_learning, LearnerConfig, TesterConfig,
};
use gaussdim::spectral::{
    largest_canonical_angle, operator_norm, orthogonal_svd, partition_step, symmetric_eigen_sorted,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{
    commutator_norm, exp_i, gaussian_sandwich, normal_matrix, quartic_rotation,
    random_even_hermitian,
};

/// Criteria that fail because the stated relation is false; see the decisions ledger.
const KNOWN_RED: &[&str] = &["3", "4", "9", "10"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// 1. `{γ_a, γ_b} = 2δ_ab` and `tr(γ_a γ_b) = 2^n δ_ab`, compared exactly.
fn algebra_exactness() -> Outcome {
    let mut failures = 0;
    let mut pairs = 0;
    for n in 1..=4 {
        let dense: Vec<DenseOperator> = majoranas(n).unwrap().iter().map(|g| g.to_dense()).collect();
        let d = 1usize << n;
        for (a, ga) in dense.iter().enumerate() {
            for (b, gb) in dense.iter().enumerate() {
                pairs += 1;
                let anti = ga.matrix() * gb.matrix() + gb.matrix() * ga.matrix();
                let want = if a == b {
                    DMatrix::<C64>::identity(d, d) * C64::new(2.0, 0.0)
                } else {
                    DMatrix::zeros(d, d)
                };
                let trace = hs_inner(ga, gb).unwrap();
                let want_trace = if a == b { d as f64 } else { 0.0 };
                if anti != want || trace != C64::new(want_trace, 0.0) {
                    failures += 1;
                }
            }
        }
    }
    outcome(failures == 0, format!("{pairs} pairs over n = 1..4, {failures} inexact"))
}

/// 2. Synthesized Gaussians meet the conjugation contract.
fn synthesis_contract() -> Outcome {
    let results: Vec<(f64, f64, bool)> = [2usize, 3, 4]
        .par_iter()
        .flat_map(|&n| {
            (0..100u64).into_par_iter().map(move |i| {
                let mut r = rng(2_000 + 100 * n as u64 + i);
                let mut o = random_orthogonal(2 * n, &mut r).into_inner();
                // alternate determinant signs
                let want_proper = i % 2 == 0;
                if (o.determinant() > 0.0) != want_proper {
                    o.column_mut(0).neg_mut();
                }
                let o = OrthogonalMatrix::new(o).unwrap();
                let g = synthesize_gaussian(&o).unwrap();
                let conj = conjugation_residual(g.dense(), o.matrix()).unwrap();
                let corr = max_abs(&(correlation_matrix_exact(g.dense()).unwrap() - o.matrix()));
                (conj, corr, o.is_proper())
            })
        })
        .collect();
    let conj = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let corr = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let improper = results.iter().filter(|r| !r.2).count();
    outcome(
        conj <= 1e-8 && corr <= 1e-8 && improper == 150,
        format!(
            "300 targets ({improper} with det −1): max conjugation residual {conj:.1e}, max |M − O| {corr:.1e}"
        ),
    )
}

/// 3. Unit singular values, product rule and compression witness on doped instances.
fn structural_lemmas() -> Outcome {
    let configs = [(3usize, 1usize, 1usize), (4, 1, 2), (5, 2, 1)];
    let rows: Vec<(bool, f64, f64, f64)> = configs
        .par_iter()
        .flat_map(|&(n, t, kappa)| {
            (0..50u64).into_par_iter().map(move |i| {
                let mut r = rng(3_000 + 1_000 * n as u64 + i);
                let (circuit, u) = random_doped_circuit(n, t, kappa, &mut r).unwrap();
                let (_, u2) = random_doped_circuit(n, t, kappa, &mut r).unwrap();
                let k = circuit.claimed_dimension();
                let m = correlation_matrix_exact(&u).unwrap();
                let units_ok = unit_singular_value_count(&m, 1e-8) >= k;
                let product = correlation_matrix_exact(&u.matmul(&u2).unwrap()).unwrap();
                let rule = max_abs(&(product - &m * correlation_matrix_exact(&u2).unwrap()));
                // the rule does hold once either factor is Gaussian
                let g = random_gaussian(n, &mut r).unwrap();
                let ug = correlation_matrix_exact(&u.matmul(g.dense()).unwrap()).unwrap();
                let gu = correlation_matrix_exact(&g.dense().matmul(&u).unwrap()).unwrap();
                let gaussian_rule = max_abs(&(ug - &m * g.target().matrix()))
                    .max(max_abs(&(gu - g.target().matrix() * &m)));
                let svd = orthogonal_svd(&m).unwrap();
                let g_a = synthesize_gaussian(&svd.v_a).unwrap();
                let g_b = synthesize_gaussian(&svd.v_b).unwrap();
                let w = g_a.dense().adjoint().matmul(&u).unwrap().matmul(g_b.dense()).unwrap();
                let gammas = majoranas(n).unwrap();
                let witness = gammas[..2 * (k / 2)]
                    .iter()
                    .map(|g| commutator_norm(&w, &g.to_dense()))
                    .fold(0.0, f64::max);
                (units_ok, rule, witness, gaussian_rule)
            })
        })
        .collect();
    let unit_failures = rows.iter().filter(|r| !r.0).count();
    let rule = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let witness = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let gaussian_rule = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    outcome(
        unit_failures == 0 && rule <= 1e-8 && witness <= 1e-6,
        format!(
            "150 instances: {unit_failures} short of 2n − 2κt unit values; product rule on doped pairs {rule:.1e} \
             (with one Gaussian factor {gaussian_rule:.1e}); max commutator {witness:.1e}"
        ),
    )
}

/// 4. Choi readout identity and `frobenius² + choi_overlap = 1`.
fn choi_identity() -> Outcome {
    let rows: Vec<(f64, f64, f64)> = [2usize, 3]
        .par_iter()
        .flat_map(|&n| {
            (0..20u64).into_par_iter().map(move |i| {
                let mut r = rng(4_000 + 100 * n as u64 + i);
                let u = random_unitary(n, &mut r);
                let v = random_unitary(n, &mut r);
                let readout = build_choi_state(&u).unwrap().two_point_matrix().unwrap();
                let readout_err = max_abs(&(readout - correlation_matrix_exact(&u).unwrap()));
                let f = frobenius_distance(&u, &v).unwrap();
                let overlap = choi_overlap(&u, &v).unwrap();
                let fact_err = (f * f + overlap - 1.0).abs();
                // the relation the overlap does satisfy: tr(σ_U σ_V) = (1 − d_F²)²
                let squared_err = (overlap - (1.0 - f * f).powi(2)).abs();
                (readout_err, fact_err, squared_err)
            })
        })
        .collect();
    let readout = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let fact = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let squared = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    outcome(
        readout <= 1e-8 && fact <= 1e-8,
        format!(
            "40 unitaries: readout {readout:.1e}; |d_F² + overlap − 1| up to {fact:.3} \
             (overlap = (1 − d_F²)² holds to {squared:.1e})"
        ),
    )
}

/// 5. Weyl, singular-value closeness and Davis–Kahan on random instances.
fn perturbation_facts() -> Outcome {
    let mut r = rng(5_000);
    let mut weyl_worst = f64::NEG_INFINITY;
    let mut closeness_worst = f64::NEG_INFINITY;
    for _ in 0..1_000 {
        let size = 2 * r.random_range(1..=4usize);
        let a = normal_matrix(size, &mut r);
        let b = normal_matrix(size, &mut r) * r.random_range(0.01..1.0);
        let sa = singular_values(&a);
        let sb = singular_values(&b);
        let sum = singular_values(&(&a + &b));
        for k in 1..=size {
            for l in 1..=size + 1 - k {
                weyl_worst = weyl_worst.max(sum[k + l - 2] - sa[k - 1] - sb[l - 1]);
            }
        }
        let bound = operator_norm(&b);
        for (x, y) in sa.iter().zip(&sum) {
            closeness_worst = closeness_worst.max((x - y).abs() - bound);
        }
    }
    let mut dk_worst = f64::NEG_INFINITY;
    let mut dk_cases = 0;
    while dk_cases < 100 {
        let size = 2 * r.random_range(2..=4usize);
        let k = r.random_range(1..size);
        let q = random_orthogonal(size, &mut r).into_inner();
        let mut spectrum: Vec<f64> = (0..size).map(|_| r.random_range(-1.0..1.0)).collect();
        spectrum.sort_by(|x, y| y.total_cmp(x));
        for s in spectrum.iter_mut().take(k) {
            *s += 1.0;
        }
        let a = &q * DMatrix::from_diagonal(&DVector::from_vec(spectrum)) * q.transpose();
        let noise = normal_matrix(size, &mut r) * r.random_range(0.01..0.3);
        let b = &a + (&noise + noise.transpose()) * 0.5;
        let (la, va) = symmetric_eigen_sorted(&a);
        let (lb, vb) = symmetric_eigen_sorted(&b);
        let zeta = la[k - 1] - lb[k];
        if zeta <= 0.0 {
            continue;
        }
        dk_cases += 1;
        let theta = largest_canonical_angle(
            &va.columns(0, k).into_owned(),
            &vb.columns(0, k).into_owned(),
        )
        .unwrap();
        dk_worst = dk_worst.max(theta.sin() - operator_norm(&(&a - &b)) / zeta);
    }
    outcome(
        weyl_worst <= 1e-10 && closeness_worst <= 1e-10 && dk_worst <= 1e-10,
        format!(
            "1000 pairs: Weyl slack {weyl_worst:.1e}, closeness slack {closeness_worst:.1e}; \
             100 gapped pairs: Davis–Kahan slack {dk_worst:.1e}"
        ),
    )
}

/// 6. Tester completeness (exact policy) and soundness (binomial at the tester's shot count).
fn tester() -> Outcome {
    let configs = [(3usize, 1usize, 1usize), (4, 1, 2), (5, 2, 1), (3, 1, 2)];
    let accepted = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let (n, t, kappa) = configs[i as usize % configs.len()];
            let mut r = rng(6_000 + i);
            let (circuit, u) = random_doped_circuit(n, t, kappa, &mut r).unwrap();
            let cfg = TesterConfig::new(circuit.claimed_dimension().max(1), 0.4, 0.05)
                .with_policy(ShotPolicy::Exact);
            test_dimension(&u, &cfg, i).unwrap().accept
        })
        .count();

    let (n, k, eps, delta) = (3usize, 4usize, 0.4, 0.05);
    let shots = shots_for_tester(n, k, eps, delta).unwrap();
    let far_limit = 1.0 - eps * eps / (4.0 * k as f64);
    let rows: Vec<(bool, f64)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(6_500 + i);
            // σ_4 = cos 2θ ∈ [0.9, far_limit]
            let c = r.random_range(0.9..=far_limit);
            let core = quartic_rotation(n, [1, 2, 3, 4], c.acos() / 2.0);
            let u = gaussian_sandwich(n, &core, &mut r);
            let sigma_k = singular_values(&correlation_matrix_exact(&u).unwrap())[k - 1];
            let cfg = TesterConfig::new(k, eps, delta);
            (test_dimension(&u, &cfg, 10_000 + i).unwrap().accept, sigma_k)
        })
        .collect();
    let rejected = rows.iter().filter(|r| !r.0).count();
    let worst_sigma = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    outcome(
        accepted == 100 && rejected >= 95 && worst_sigma <= far_limit + 1e-12,
        format!(
            "exact policy accepts {accepted}/100; binomial at m_test = {shots} rejects {rejected}/100 \
             (max σ_4 = {worst_sigma:.6} ≤ {far_limit})"
        ),
    )
}

/// 7. Exact policy and exact tomography recover the input.
fn learner_zero_noise() -> Outcome {
    let configs = [(4usize, 1usize), (5, 1), (5, 2)];
    let rows: Vec<(f64, bool)> = configs
        .par_iter()
        .flat_map(|&(n, t)| {
            (0..50u64).into_par_iter().map(move |i| {
                let mut r = rng(7_000 + 1_000 * n as u64 + 100 * t as u64 + i);
                let (circuit, u) = random_doped_circuit(n, t, 2, &mut r).unwrap();
                let cfg = LearnerConfig::new(circuit.claimed_dimension(), 0.1, 0.1)
                    .with_policy(ShotPolicy::Exact);
                let learned = learn(&u, &cfg, i).unwrap();
                let report = verify_learning(&u, &learned).unwrap();
                (report.distances.diamond, report.proper)
            })
        })
        .collect();
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let improper = rows.iter().filter(|r| !r.1).count();
    outcome(
        worst <= 1e-6 && improper == 0,
        format!("150 instances (κ = 2): max diamond {worst:.1e}, {improper} below 2⌊k′/2⌋ unit values"),
    )
}

/// 8. Surrogate noise at `α(ε = 0.25, C = 10)` on `(n, t, κ) = (4, 1, 2)`.
fn learner_under_noise() -> Outcome {
    let (n, t, kappa, eps, delta, c) = (4usize, 1usize, 2usize, 0.25, 0.1, 10.0);
    let rows: Vec<(f64, bool, usize)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut r = rng(8_000 + seed);
            let (circuit, u) = random_doped_circuit(n, t, kappa, &mut r).unwrap();
            let cfg = LearnerConfig::new(circuit.claimed_dimension(), eps, delta).with_c(c);
            let learned = learn(&u, &cfg, seed).unwrap();
            let report = verify_learning(&u, &learned).unwrap();
            let k_prime = learned.k_prime;
            let gap_ok = if k_prime < 2 * n {
                let step = partition_step(eps, learned.t);
                let sigma = &learned.sigma_hat;
                let slack = learned.partition.shortfall(sigma);
                let gap = sigma[k_prime - 1] - sigma[k_prime];
                // proof form: σ_{k′}(M) − σ_{k′+1}(M̂) ≥ step − slack − ‖M − M̂‖
                let exact = singular_values(&correlation_matrix_exact(&u).unwrap());
                let noise = operator_norm(
                    &(gaussdim::choi::estimate_correlation_matrix(&u, learned.policy, seed)
                        .unwrap()
                        .matrix
                        - correlation_matrix_exact(&u).unwrap()),
                );
                gap >= step - slack && exact[k_prime - 1] - sigma[k_prime] >= step - slack - noise
            } else {
                true
            };
            (report.distances.diamond, gap_ok, k_prime)
        })
        .collect();
    let within = rows.iter().filter(|r| r.0 <= eps).count();
    let gap_failures = rows.iter().filter(|r| !r.1).count();
    let gapped_runs = rows.iter().filter(|r| r.2 < 2 * n).count();
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    outcome(
        within >= 90 && gap_failures == 0,
        format!(
            "diamond ≤ {eps} in {within}/100 (max {worst:.2e}); eigengap holds in all but \
             {gap_failures} of {gapped_runs} runs with k′ < 2n"
        ),
    )
}

/// 9. Rounding lemmas on constructed families.
fn rounding_bounds() -> Outcome {
    // Frobenius rounding: U = G_A (1 ⊗ u) G_B† with u = exp(iθH) on m modes
    // (random even H) or a quartic rotation; k = 2(n − m) exact unit values.
    let mut frob_cases = 0;
    let mut frob_worst = f64::NEG_INFINITY;
    let mut chain = [f64::NEG_INFINITY; 3];
    let mut chain_cases = 0;
    let mut middle_failures = 0;
    let mut r = rng(9_000);
    for &(n, m) in &[(3usize, 2usize), (4, 2), (4, 3)] {
        for &theta in &[0.003, 0.01, 0.03, 0.1, 0.3] {
            for family in 0..2 {
                let block = if family == 0 {
                    exp_i(&random_even_hermitian(m, &mut r), theta)
                } else {
                    quartic_rotation(m, [1, 2, 3, 4], theta)
                };
                let u = gaussian_sandwich(n, &block, &mut r);
                let sigma = singular_values(&correlation_matrix_exact(&u).unwrap());
                let k = 2 * (n - m);
                for ell in 1..=(2 * n - k) {
                    let tau = (1.0 - sigma[k + ell - 1]).max(0.0);
                    let rounded = exact_rounding(&u, k + ell).unwrap();
                    let d_f = frobenius_distance(&u, &rounded).unwrap();
                    frob_worst = frob_worst.max(d_f - 2.0 * (ell as f64 * tau).sqrt());
                    frob_cases += 1;
                }
                // diamond rounding with t = m modes, every t′ < t
                let t = m as f64;
                for t_prime in 0..m {
                    let k_prime = 2 * n - 2 * t_prime;
                    let gap = (1.0 - sigma[k_prime - 1]).max(0.0);
                    let eps = (16.0 * t * 2f64.powf(t) * gap).sqrt();
                    let rounded = exact_rounding(&u, k_prime).unwrap();
                    let d_f = frobenius_distance(&u, &rounded).unwrap();
                    let d_d = diamond_distance_unitaries(&u, &rounded).unwrap();
                    let scale = 2f64.sqrt() * 2f64.powf(t / 2.0);
                    chain[0] = chain[0].max(d_f - eps / scale);
                    chain[1] = chain[1].max(d_d - scale * d_f);
                    if d_d - scale * d_f > 1e-9 {
                        middle_failures += 1;
                    }
                    chain[2] = chain[2].max(d_d - eps);
                    chain_cases += 1;
                }
            }
        }
    }
    let tol = 1e-9;
    outcome(
        frob_worst <= tol && chain.iter().all(|&x| x <= tol),
        format!(
            "{frob_cases} (ℓ, τ) cases: max d_F − 2√(ℓτ) = {frob_worst:.1e}; {chain_cases} diamond chains: \
             max d_F − ε/(√2·2^(t/2)) = {:.1e}, d⋄ − √2·2^(t/2)·d_F = {:.1e} \
             (violated in {middle_failures}), d⋄ − ε = {:.1e}",
            chain[0], chain[1], chain[2]
        ),
    )
}

/// 10. Frobenius/diamond sandwich and closed form against the search oracle.
fn metrics_sandwich() -> Outcome {
    let rows: Vec<(usize, f64, f64, Option<(f64, f64)>)> = [1usize, 2, 3]
        .par_iter()
        .flat_map(|&q| {
            (0..50u64).into_par_iter().map(move |i| {
                let mut r = rng(10_000 + 100 * q as u64 + i);
                let u = random_unitary(q, &mut r);
                let v = random_unitary(q, &mut r);
                let d = (1usize << q) as f64;
                let f = frobenius_distance(&u, &v).unwrap();
                let dd = diamond_distance_unitaries(&u, &v).unwrap();
                let oracle = (q <= 2).then(|| {
                    let lower = diamond_lower_bound_search(&u, &v, 1, 16, 2_000, &mut r).unwrap();
                    (dd - lower, lower - dd)
                });
                (q, f - dd, dd - (2.0 * d).sqrt() * f, oracle)
            })
        })
        .collect();
    let lower_worst = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let upper_failures: Vec<usize> = (1..=3)
        .map(|q| rows.iter().filter(|r| r.0 == q && r.2 > 1e-9).count())
        .collect();
    let gap = rows.iter().filter_map(|r| r.3).map(|o| o.0).fold(0.0, f64::max);
    let above = rows.iter().filter_map(|r| r.3).map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
    let sandwich_ok = lower_worst <= 1e-9 && upper_failures.iter().all(|&c| c == 0);
    let oracle_ok = gap <= 0.02 && above <= 1e-9;
    outcome(
        sandwich_ok && oracle_ok,
        format!(
            "150 pairs: d_F ≤ d⋄ slack {lower_worst:.1e}; d⋄ > √(2d)·d_F in {}/50, {}/50, {}/50 pairs at d = 2, 4, 8; \
             closed form − search ≤ {gap:.1e}, search − closed form ≤ {above:.1e}",
            upper_failures[0], upper_failures[1], upper_failures[2]
        ),
    )
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: "1", name: "algebra exactness", budget: Duration::from_secs(10), run: algebra_exactness },
        Criterion { id: "2", name: "gaussian synthesis contract", budget: Duration::from_secs(120), run: synthesis_contract },
        Criterion { id: "3", name: "structural lemmas", budget: Duration::from_secs(600), run: structural_lemmas },
        Criterion { id: "4", name: "choi identity", budget: Duration::from_secs(300), run: choi_identity },
        Criterion { id: "5", name: "perturbation facts", budget: Duration::from_secs(120), run: perturbation_facts },
        Criterion { id: "6", name: "tester", budget: Duration::from_secs(900), run: tester },
        Criterion { id: "7", name: "learner zero-noise exactness", budget: Duration::from_secs(1200), run: learner_zero_noise },
        Criterion { id: "8", name: "learner under noise", budget: Duration::from_secs(1800), run: learner_under_noise },
        Criterion { id: "9", name: "rounding bounds", budget: Duration::from_secs(600), run: rounding_bounds },
        Criterion { id: "10", name: "metrics sandwich and diamond closed form", budget: Duration::from_secs(300), run: metrics_sandwich },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut surprises = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == c.id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = result.pass && in_time;
        let expected_red = KNOWN_RED.contains(&c.id);
        let tag = match (pass, expected_red) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, see ledger)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {:>2} {:<42} {tag}: {} [{:.1} s of {} s]",
            c.id,
            c.name,
            result.detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if pass {
            passed += 1;
        }
        if pass == expected_red {
            surprises.push(c.id);
        }
    }
    println!("{passed}/{ran} criteria pass; known failures: {}", KNOWN_RED.join(", "));
    if !surprises.is_empty() {
        eprintln!("unexpected outcome for criteria {}", surprises.join(", "));
        std::process::exit(1);
    }
}

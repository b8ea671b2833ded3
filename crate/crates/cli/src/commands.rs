//! Drivers behind each subcommand.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use gaussdim::choi::{shots_for_learner, shots_for_tester};
use gaussdim::gaussian::{correlation_matrix_exact, singular_values, unit_singular_value_count};
use gaussdim::metrics::distance_report;
use gaussdim::protocols::{learn, test_dimension, verify_learning};
use gaussdim::{
    random_doped_circuit, CircuitFile, DenseOperator, DopedCircuit, LearnerConfig, ShotPolicy,
    TesterConfig, TomographyMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::records::{
    BenchRecord, Decomposition, Diagnostics, Distances, Instance, Percentiles, Repetition,
    ResultRecord, Sidecar, BENCH_SCHEMA, RESULT_SCHEMA, SIDECAR_SCHEMA,
};
use crate::{BenchArgs, BenchMode, DistanceArgs, GenArgs, LearnArgs, PolicyArgs, PolicyChoice, TestArgs};

/// Dense objects are `2^n × 2^n`; Choi states double that.
pub const MAX_MODES: usize = 6;
pub const OUT_DIR_VAR: &str = "GAUSSDIM_OUT_DIR";

/// Whether the command finished with promise or guard warnings.
pub type Warned = bool;

fn guard_modes(n: usize) -> Result<()> {
    ensure!((1..=MAX_MODES).contains(&n), "n = {n} must lie in 1..={MAX_MODES}");
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Explicit path, else `$GAUSSDIM_OUT_DIR/<name>`, else `None`.
fn output_path(explicit: Option<&PathBuf>, name: &str) -> Option<PathBuf> {
    explicit
        .cloned()
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(name)))
}

/// Writes lines to stdout; a closed pipe (`| head`) is not an error.
fn print_lines(lines: &[String]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for line in lines {
        match writeln!(out, "{line}") {
            Err(e) if e.kind() == ErrorKind::BrokenPipe => return Ok(()),
            other => other?,
        }
    }
    Ok(())
}

/// Prints the record and writes it where requested.
fn emit<T: Serialize>(value: &T, path: Option<PathBuf>) -> Result<()> {
    if let Some(path) = path {
        write_json(&path, value)?;
    }
    print_lines(&[serde_json::to_string_pretty(value)?])
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

fn load_circuit(path: &Path) -> Result<(DopedCircuit, DenseOperator)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: CircuitFile =
        serde_json::from_str(&text).with_context(|| format!("parsing circuit {}", path.display()))?;
    guard_modes(file.n)?;
    let circuit = DopedCircuit::from_file(&file)?;
    let u = circuit.unitary()?;
    Ok((circuit, u))
}

fn instance(path: &Path, circuit: &DopedCircuit) -> Instance {
    Instance {
        path: path.display().to_string(),
        n: circuit.modes(),
        claimed_dimension: circuit.claimed_dimension(),
    }
}

fn exact_sigma(u: &DenseOperator) -> Result<Vec<f64>> {
    Ok(singular_values(&correlation_matrix_exact(u)?))
}

fn explicit_policy(args: &PolicyArgs) -> Option<ShotPolicy> {
    match args.policy {
        PolicyChoice::Default => None,
        PolicyChoice::Exact => Some(ShotPolicy::Exact),
        PolicyChoice::Binomial => args
            .shots
            .map(|shots_per_entry| ShotPolicy::Binomial { shots_per_entry }),
        PolicyChoice::Surrogate => args.alpha.map(|alpha| ShotPolicy::GaussianSurrogate { alpha }),
    }
}

fn tester_config(k: usize, epsilon: f64, delta: f64, args: &PolicyArgs, n: usize) -> Result<TesterConfig> {
    let mut cfg = TesterConfig::new(k, epsilon, delta);
    cfg.validate(n)?;
    let policy = match (explicit_policy(args), args.policy) {
        (Some(p), _) => p,
        // surrogate at the accuracy the tester's analysis assumes
        (None, PolicyChoice::Surrogate) => ShotPolicy::GaussianSurrogate {
            alpha: epsilon * epsilon / (9.0 * k as f64),
        },
        (None, _) => ShotPolicy::binomial(shots_for_tester(n, k, epsilon, delta)?)?,
    };
    cfg = cfg.with_policy(policy);
    Ok(cfg)
}

struct LearnSettings {
    k: usize,
    epsilon: f64,
    delta: f64,
    c: f64,
    tomography: TomographyMode,
}

fn learner_config(s: &LearnSettings, args: &PolicyArgs, n: usize) -> Result<LearnerConfig> {
    let mut cfg = LearnerConfig::new(s.k, s.epsilon, s.delta)
        .with_c(s.c)
        .with_tomography(s.tomography);
    cfg.validate(n)?;
    let policy = match (explicit_policy(args), args.policy) {
        (Some(p), _) => p,
        (None, PolicyChoice::Binomial) => {
            let (shots, _) = shots_for_learner(n, cfg.t(n), s.epsilon, s.delta, s.c)?;
            ShotPolicy::binomial(shots).context("the learner's shot count does not fit in 64 bits")?
        }
        (None, _) => cfg.resolve_policy(n),
    };
    cfg = cfg.with_policy(policy);
    Ok(cfg)
}

fn learner_config_json(cfg: &LearnerConfig, n: usize) -> serde_json::Value {
    json!({
        "k": cfg.k,
        "epsilon": cfg.epsilon,
        "delta": cfg.delta,
        "c": cfg.c,
        "heuristic_constants": cfg.heuristic_constants(),
        "t": cfg.t(n),
        "alpha": cfg.alpha(n),
        "policy": cfg.resolve_policy(n),
        "tomography": cfg.tomography,
    })
}

fn tester_config_json(cfg: &TesterConfig, n: usize) -> Result<serde_json::Value> {
    Ok(json!({
        "k": cfg.k,
        "epsilon": cfg.epsilon,
        "delta": cfg.delta,
        "threshold": cfg.threshold(),
        "policy": cfg.resolve_policy(n)?,
    }))
}

fn resolve_k(k: Option<usize>, circuit: &DopedCircuit) -> usize {
    k.unwrap_or_else(|| circuit.claimed_dimension())
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

// ---------------------------------------------------------------------------

pub fn gen(args: &GenArgs) -> Result<Warned> {
    guard_modes(args.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (circuit, u) = random_doped_circuit(args.n, args.t, args.kappa, &mut rng)?;
    let name = format!("circuit-n{}-t{}-kappa{}-seed{}.json", args.n, args.t, args.kappa, args.seed);
    let path = output_path(args.out.as_ref(), &name).unwrap_or_else(|| PathBuf::from(&name));
    let m = correlation_matrix_exact(&u)?;
    let sidecar = Sidecar {
        schema: SIDECAR_SCHEMA.into(),
        n: args.n,
        t: args.t,
        kappa: args.kappa,
        seed: args.seed,
        claimed_dimension: circuit.claimed_dimension(),
        singular_values: singular_values(&m),
        unit_singular_values: unit_singular_value_count(&m, 1e-8),
    };
    let sidecar_path = sidecar_path(&path);
    write_json(&path, &circuit.to_file())?;
    write_json(&sidecar_path, &sidecar)?;
    print_lines(&[path.display().to_string(), sidecar_path.display().to_string()])?;
    Ok(false)
}

/// `foo.json` → `foo.sidecar.json`.
pub fn sidecar_path(circuit: &Path) -> PathBuf {
    circuit.with_file_name(format!("{}.sidecar.json", file_stem(circuit)))
}

pub fn test(args: &TestArgs) -> Result<Warned> {
    let start = Instant::now();
    let (circuit, u) = load_circuit(&args.circuit)?;
    let n = circuit.modes();
    let k = resolve_k(args.k, &circuit);
    ensure!(k >= 1, "the circuit claims dimension 0; pass --k");
    let cfg = tester_config(k, args.epsilon, args.delta, &args.policy, n)?;
    let verdict = test_dimension(&u, &cfg, args.seed)?;
    let record = ResultRecord {
        schema: RESULT_SCHEMA.into(),
        command: "test".into(),
        instance: instance(&args.circuit, &circuit),
        config: tester_config_json(&cfg, n)?,
        diagnostics: Diagnostics {
            sigma: verdict.sigma_hat.clone(),
            k_prime: None,
            warnings: Vec::new(),
            hybrid: None,
        },
        verdict: Some(verdict),
        decomposition: None,
        distances: None,
        seed: args.seed,
        wall_time_ms: elapsed_ms(start),
    };
    let name = format!("test-{}-seed{}.json", file_stem(&args.circuit), args.seed);
    emit(&record, output_path(args.out.as_ref(), &name))?;
    Ok(record.has_promise_warning())
}

pub fn learn_cmd(args: &LearnArgs) -> Result<Warned> {
    let start = Instant::now();
    let (circuit, u) = load_circuit(&args.circuit)?;
    let n = circuit.modes();
    let settings = LearnSettings {
        k: resolve_k(args.k, &circuit),
        epsilon: args.epsilon,
        delta: args.delta,
        c: args.c,
        tomography: args.tomography.into(),
    };
    let cfg = learner_config(&settings, &args.policy, n)?;
    let learned = learn(&u, &cfg, args.seed)?;
    let report = verify_learning(&u, &learned)?;
    let record = ResultRecord {
        schema: RESULT_SCHEMA.into(),
        command: "learn".into(),
        instance: instance(&args.circuit, &circuit),
        config: learner_config_json(&cfg, n),
        verdict: None,
        decomposition: Some(Decomposition::from_learned(&learned)),
        distances: Some(Distances {
            frobenius: report.distances.frobenius,
            diamond: report.distances.diamond,
        }),
        diagnostics: Diagnostics {
            sigma: learned.sigma_hat.clone(),
            k_prime: Some(learned.k_prime),
            warnings: learned.warnings.clone(),
            hybrid: report.hybrid,
        },
        seed: args.seed,
        wall_time_ms: elapsed_ms(start),
    };
    let name = format!("learn-{}-seed{}.json", file_stem(&args.circuit), args.seed);
    emit(&record, output_path(args.out.as_ref(), &name))?;
    Ok(record.has_promise_warning())
}

/// The unitary described by a circuit file or by a learn result.
fn load_unitary(path: &Path) -> Result<DenseOperator> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("layers").is_some() {
        return Ok(load_circuit(path)?.1);
    }
    let record: ResultRecord = serde_json::from_value(value)
        .with_context(|| format!("{} is neither a circuit nor a result record", path.display()))?;
    let Some(decomposition) = record.decomposition else {
        bail!("{} holds no decomposition (only learn results do)", path.display());
    };
    guard_modes(decomposition.g_a.target.len() / 2)?;
    Ok(decomposition.assemble()?)
}

pub fn distance(args: &DistanceArgs) -> Result<Warned> {
    let start = Instant::now();
    let (circuit, u) = load_circuit(&args.circuit)?;
    let v = load_unitary(&args.against)?;
    ensure!(
        u.dim() == v.dim(),
        "{} acts on {} modes but {} on {}",
        args.circuit.display(),
        u.n_qubits(),
        args.against.display(),
        v.n_qubits()
    );
    let report = distance_report(&u, &v, false)?;
    let record = ResultRecord {
        schema: RESULT_SCHEMA.into(),
        command: "distance".into(),
        instance: instance(&args.circuit, &circuit),
        config: json!({ "against": args.against.display().to_string() }),
        verdict: None,
        decomposition: None,
        distances: Some(Distances {
            frobenius: report.frobenius,
            diamond: report.diamond,
        }),
        diagnostics: Diagnostics {
            sigma: exact_sigma(&u)?,
            k_prime: None,
            warnings: Vec::new(),
            hybrid: None,
        },
        seed: 0,
        wall_time_ms: elapsed_ms(start),
    };
    let name = format!("distance-{}-{}.json", file_stem(&args.circuit), file_stem(&args.against));
    emit(&record, output_path(args.out.as_ref(), &name))?;
    Ok(false)
}

/// Per-repetition seed: the master seed's ChaCha stream `index`.
pub fn derive_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    rng.random()
}

fn bench_repetition(args: &BenchArgs, index: usize) -> Result<(Repetition, bool)> {
    let start = Instant::now();
    let seed = derive_seed(args.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (circuit, u) = random_doped_circuit(args.n, args.t, args.kappa, &mut rng)?;
    let k = resolve_k(args.k, &circuit);
    let (success, score, k_prime, warnings, warned) = match args.mode {
        BenchMode::Test => {
            ensure!(k >= 1, "instances claim dimension 0; pass --k");
            let cfg = tester_config(k, args.epsilon, args.delta, &args.policy, args.n)?;
            let verdict = test_dimension(&u, &cfg, seed)?;
            (verdict.accept, verdict.sigma_k_hat, None, 0, false)
        }
        BenchMode::Learn => {
            let settings = LearnSettings {
                k,
                epsilon: args.epsilon,
                delta: args.delta,
                c: args.c,
                tomography: args.tomography.into(),
            };
            let cfg = learner_config(&settings, &args.policy, args.n)?;
            let learned = learn(&u, &cfg, seed)?;
            let assembled = learned.assemble()?;
            let diamond = gaussdim::diamond_distance_unitaries(&u, &assembled)?;
            let warned = learned.warnings.iter().any(|w| w.is_promise_signal());
            (diamond <= args.epsilon, diamond, Some(learned.k_prime), learned.warnings.len(), warned)
        }
    };
    let rep = Repetition {
        index,
        seed,
        success,
        score,
        k_prime,
        warnings,
        wall_time_ms: elapsed_ms(start),
    };
    if let Some(dir) = &args.rep_dir {
        write_json(&dir.join(format!("rep-{index:05}.json")), &rep)?;
    }
    Ok((rep, warned))
}

pub fn bench(args: &BenchArgs) -> Result<Warned> {
    guard_modes(args.n)?;
    ensure!(args.reps >= 1, "--reps must be at least 1");
    let start = Instant::now();
    let results: Vec<(Repetition, bool)> = (0..args.reps)
        .into_par_iter()
        .map(|i| bench_repetition(args, i))
        .collect::<Result<_>>()?;
    let warned = results.iter().any(|r| r.1);
    let runs: Vec<Repetition> = results.into_iter().map(|r| r.0).collect();
    let successes = runs.iter().filter(|r| r.success).count();
    let scores: Vec<f64> = runs.iter().map(|r| r.score).collect();
    let times: Vec<f64> = runs.iter().map(|r| r.wall_time_ms as f64).collect();
    let mode = match args.mode {
        BenchMode::Test => "test",
        BenchMode::Learn => "learn",
    };
    let record = BenchRecord {
        schema: BENCH_SCHEMA.into(),
        mode: mode.into(),
        config: json!({
            "n": args.n,
            "t": args.t,
            "kappa": args.kappa,
            "k": args.k,
            "epsilon": args.epsilon,
            "delta": args.delta,
            "c": args.c,
            "policy": args.policy.policy,
            "shots": args.policy.shots,
            "alpha": args.policy.alpha,
            "tomography": TomographyMode::from(args.tomography),
        }),
        repetitions: args.reps,
        success_rate: successes as f64 / args.reps as f64,
        score: Percentiles::of(&scores),
        wall_time_ms: Percentiles::of(&times),
        runs,
        seed: args.seed,
        total_wall_time_ms: elapsed_ms(start),
    };
    let name = format!(
        "bench-{mode}-n{}-t{}-kappa{}-seed{}.json",
        args.n, args.t, args.kappa, args.seed
    );
    emit(&record, output_path(args.out.as_ref(), &name))?;
    Ok(warned)
}

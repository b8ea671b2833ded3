//! Doped circuits: Gaussian layers interleaved with few local non-Gaussian
//! gates, and their JSON file format.
//!
//! Layers are listed in application order, so the circuit unitary is
//! `L_last ⋯ L_2 L_1`. A local gate on modes `j..j+κ-1` acts on the qubits of
//! those modes; it must conserve the parity of its window, which is what makes
//! it a physical `κ`-local fermionic gate under the Jordan–Wigner map.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{haar_unitary, DenseOperator, C64};
use crate::error::{Error, Result};
use crate::gaussian::{
    gaussian_from_sequence, random_orthogonal, synthesize_gaussian, GaussianUnitary, GivensStep,
    OrthogonalMatrix,
};
use crate::majorana::majorana;

/// One element of a doped circuit.
#[derive(Clone, Debug)]
pub enum Layer {
    Gaussian(GaussianUnitary),
    /// Local gate on contiguous 1-based `modes`.
    Local {
        modes: Vec<usize>,
        gate: DenseOperator,
    },
    Givens(GivensStep),
    /// Conjugation by `γ_{2n}`.
    Reflection,
}

#[derive(Clone, Debug)]
pub struct DopedCircuit {
    n: usize,
    layers: Vec<Layer>,
    locality: usize,
}

impl DopedCircuit {
    pub fn new(n: usize, layers: Vec<Layer>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one mode".into()));
        }
        let mut locality = 0;
        for layer in &layers {
            match layer {
                Layer::Gaussian(g) if g.modes() != n => {
                    return Err(Error::InvalidCircuit(format!(
                        "Gaussian layer on {} modes in a {n}-mode circuit",
                        g.modes()
                    )))
                }
                Layer::Local { modes, gate } => {
                    validate_local(n, modes, gate)?;
                    locality = locality.max(modes.len());
                }
                Layer::Givens(s) => {
                    if s.a == s.b || s.a == 0 || s.b == 0 || s.a > 2 * n || s.b > 2 * n {
                        return Err(Error::InvalidCircuit(format!(
                            "bad Givens indices ({}, {})",
                            s.a, s.b
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(Self { n, layers, locality })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of local (non-Gaussian) gates.
    pub fn non_gaussian_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, Layer::Local { .. }))
            .count()
    }

    /// Largest local-gate support.
    pub fn locality(&self) -> usize {
        self.locality
    }

    /// Lower bound `2n − 2κt` on the Gaussian dimension.
    pub fn claimed_dimension(&self) -> usize {
        (2 * self.n).saturating_sub(2 * self.locality * self.non_gaussian_count())
    }

    pub fn unitary(&self) -> Result<DenseOperator> {
        let n = self.n;
        let dim = 1usize << n;
        let mut acc = DMatrix::<C64>::identity(dim, dim);
        for layer in &self.layers {
            let op = match layer {
                Layer::Gaussian(g) => g.dense().clone(),
                Layer::Local { modes, gate } => embed_local(n, modes[0], gate),
                Layer::Givens(s) => crate::gaussian::lift_givens(n, s.a, s.b, s.theta)?,
                Layer::Reflection => majorana(n, 2 * n)?.to_dense(),
            };
            acc = op.into_matrix() * acc;
        }
        DenseOperator::from_matrix(acc)
    }

    pub fn to_file(&self) -> CircuitFile {
        CircuitFile {
            n: self.n,
            layers: self
                .layers
                .iter()
                .map(|layer| match layer {
                    Layer::Gaussian(g) => LayerRecord::Gaussian {
                        target: g.target().to_rows(),
                    },
                    Layer::Local { modes, gate } => LayerRecord::Local {
                        modes: modes.clone(),
                        matrix: complex_rows(gate.matrix()),
                    },
                    Layer::Givens(s) => LayerRecord::Givens {
                        a: s.a,
                        b: s.b,
                        theta: s.theta,
                    },
                    Layer::Reflection => LayerRecord::Reflection,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &CircuitFile) -> Result<Self> {
        let layers = file
            .layers
            .iter()
            .map(|rec| -> Result<Layer> {
                Ok(match rec {
                    LayerRecord::Gaussian { target } => {
                        let o = OrthogonalMatrix::from_rows(target)?;
                        if o.modes() != file.n {
                            return Err(Error::InvalidCircuit(format!(
                                "Gaussian target of size {} in a {}-mode circuit",
                                o.size(),
                                file.n
                            )));
                        }
                        Layer::Gaussian(synthesize_gaussian(&o)?)
                    }
                    LayerRecord::Local { modes, matrix } => Layer::Local {
                        modes: modes.clone(),
                        gate: DenseOperator::from_matrix(matrix_from_complex_rows(matrix)?)?,
                    },
                    LayerRecord::Givens { a, b, theta } => Layer::Givens(GivensStep {
                        a: *a,
                        b: *b,
                        theta: *theta,
                    }),
                    LayerRecord::Reflection => Layer::Reflection,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, layers)
    }
}

fn validate_local(n: usize, modes: &[usize], gate: &DenseOperator) -> Result<()> {
    if modes.is_empty() || modes.len() > n {
        return Err(Error::Locality(format!(
            "local gate on {} modes in a {n}-mode circuit",
            modes.len()
        )));
    }
    if modes[0] == 0
        || modes.last().copied().unwrap_or(0) > n
        || modes.windows(2).any(|w| w[1] != w[0] + 1)
    {
        return Err(Error::Locality(format!(
            "local gate modes {modes:?} must be a contiguous window inside 1..={n}"
        )));
    }
    if gate.n_qubits() != modes.len() {
        return Err(Error::InvalidCircuit(format!(
            "gate acts on {} qubits but lists {} modes",
            gate.n_qubits(),
            modes.len()
        )));
    }
    gate.ensure_unitary()?;
    let parity_leak = parity_leakage(gate);
    if parity_leak > 1e-10 {
        return Err(Error::InvalidCircuit(format!(
            "local gate mixes parity sectors (leakage {parity_leak:.3e})"
        )));
    }
    Ok(())
}

/// Largest entry connecting basis states of different parity.
fn parity_leakage(gate: &DenseOperator) -> f64 {
    let m = gate.matrix();
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if (i.count_ones() + j.count_ones()) % 2 == 1 {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// `1 ⊗ gate ⊗ 1` with the gate's first qubit at mode `first` (1-based).
fn embed_local(n: usize, first: usize, gate: &DenseOperator) -> DenseOperator {
    let before = first - 1;
    let after = n - before - gate.n_qubits();
    DenseOperator::identity(before)
        .kron(gate)
        .kron(&DenseOperator::identity(after))
}

/// Haar-random parity-conserving unitary on `k` qubits.
pub fn random_parity_preserving<R: Rng + ?Sized>(k: usize, rng: &mut R) -> DenseOperator {
    let dim = 1usize << k;
    let even: Vec<usize> = (0..dim).filter(|i| i.count_ones() % 2 == 0).collect();
    let odd: Vec<usize> = (0..dim).filter(|i| i.count_ones() % 2 == 1).collect();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for sector in [&even, &odd] {
        let block = haar_unitary(sector.len(), rng);
        for (r, &i) in sector.iter().enumerate() {
            for (c, &j) in sector.iter().enumerate() {
                m[(i, j)] = block[(r, c)];
            }
        }
    }
    DenseOperator::from_matrix(m).expect("power-of-two dimension")
}

/// Random `t`-doped circuit on `n` modes with `κ`-local gates: `t + 1` Haar
/// Gaussian layers interleaved with `t` random parity-conserving gates on
/// uniformly random contiguous windows.
pub fn random_doped_circuit<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    kappa: usize,
    rng: &mut R,
) -> Result<(DopedCircuit, DenseOperator)> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one mode".into()));
    }
    if t > 0 && (kappa == 0 || kappa > n) {
        return Err(Error::Locality(format!(
            "locality {kappa} must lie in 1..={n}"
        )));
    }
    if 2 * kappa * t > 2 * n {
        return Err(Error::Locality(format!(
            "2κt = {} exceeds 2n = {}",
            2 * kappa * t,
            2 * n
        )));
    }
    let mut layers = Vec::with_capacity(2 * t + 1);
    layers.push(Layer::Gaussian(synthesize_gaussian(&random_orthogonal(
        2 * n,
        rng,
    ))?));
    for _ in 0..t {
        let first = rng.random_range(1..=n - kappa + 1);
        layers.push(Layer::Local {
            modes: (first..first + kappa).collect(),
            gate: random_parity_preserving(kappa, rng),
        });
        layers.push(Layer::Gaussian(synthesize_gaussian(&random_orthogonal(
            2 * n,
            rng,
        ))?));
    }
    let circuit = DopedCircuit::new(n, layers)?;
    let u = circuit.unitary()?;
    Ok((circuit, u))
}

// ---------------------------------------------------------------------------
// file format

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub n: usize,
    pub layers: Vec<LayerRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LayerRecord {
    Gaussian {
        target: Vec<Vec<f64>>,
    },
    Local {
        modes: Vec<usize>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
    Givens {
        a: usize,
        b: usize,
        theta: f64,
    },
    Reflection,
}

/// Complex matrix as nested rows of `[re, im]` pairs.
pub fn complex_rows(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_complex_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<C64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidParameter("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Gaussian certificate in serialized form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianRecord {
    pub target: Vec<Vec<f64>>,
    pub givens: Vec<GivensStep>,
    pub reflection: bool,
}

impl GaussianRecord {
    pub fn from_unitary(g: &GaussianUnitary) -> Self {
        Self {
            target: g.target().to_rows(),
            givens: g.givens_sequence().to_vec(),
            reflection: g.reflection(),
        }
    }

    pub fn to_unitary(&self) -> Result<GaussianUnitary> {
        let n = self.target.len() / 2;
        gaussian_from_sequence(n, self.givens.clone(), self.reflection)
    }
}

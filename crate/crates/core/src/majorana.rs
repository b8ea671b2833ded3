//! Symbolic Pauli words and the Jordan–Wigner Majorana operators.
//!
//! A [`PauliTerm`] is `i^phase_power · σ_1 ⊗ … ⊗ σ_n` where each factor is
//! one of `I, X, Y, Z`, encoded by an X bit and a Z bit (`Y` has both set).
//! Qubit 1 is the leftmost tensor factor, which is the most significant bit
//! of a computational-basis index. Products and traces are exact in integer
//! arithmetic; floating point only enters through [`PauliTerm::to_dense`].

use std::fmt;
use std::ops::Mul;

use crate::dense::{DenseOperator, C64};
use crate::error::{Error, Result};

/// Largest qubit count a mask can hold.
pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase_power: u8,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliTerm {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, phase_power: u8) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let mask = full_mask(n_qubits);
        if x_mask & !mask != 0 || z_mask & !mask != 0 {
            return Err(Error::InvalidParameter(format!(
                "masks wider than {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
            phase_power: phase_power % 4,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits, 0, 0, 0).expect("valid qubit count")
    }

    /// Parses a word such as `"ZXI"` or `"-iZY"` (qubit 1 first).
    pub fn from_word(word: &str) -> Result<Self> {
        let (phase, letters) = if let Some(rest) = word.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = word.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = word.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = word.strip_prefix('+') {
            (0, rest)
        } else {
            (0, word)
        };
        let n = letters.chars().count();
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, c) in letters.chars().enumerate() {
            let bit = 1u64 << (n - 1 - q);
            match c {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unexpected Pauli letter {other:?}"
                    )))
                }
            }
        }
        Self::new(n, x, z, phase)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_power(&self) -> u8 {
        self.phase_power
    }

    /// Letters only, qubit 1 first, without the phase.
    pub fn word(&self) -> String {
        (0..self.n_qubits)
            .map(|q| {
                let bit = 1u64 << (self.n_qubits - 1 - q);
                match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (false, true) => 'Z',
                    (true, true) => 'Y',
                }
            })
            .collect()
    }

    pub fn is_identity_word(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_power % 2 == 0
    }

    pub fn with_phase(self, phase_power: u8) -> Self {
        Self {
            phase_power: (self.phase_power + phase_power) % 4,
            ..self
        }
    }

    pub fn negate(self) -> Self {
        self.with_phase(2)
    }

    /// `true` when the two words commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones())
            % 2
            == 0
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        // Per qubit σ(x,z) = i^{xz} X^x Z^z, so
        // σ(x1,z1)σ(x2,z2) = i^{x1z1 + x2z2 + 2 z1x2 - x3z3} σ(x3,z3).
        let x3 = self.x_mask ^ other.x_mask;
        let z3 = self.z_mask ^ other.z_mask;
        let exponent = self.phase_power as i64
            + other.phase_power as i64
            + (self.x_mask & self.z_mask).count_ones() as i64
            + (other.x_mask & other.z_mask).count_ones() as i64
            + 2 * (self.z_mask & other.x_mask).count_ones() as i64
            - (x3 & z3).count_ones() as i64;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_mask: x3,
            z_mask: z3,
            phase_power: exponent.rem_euclid(4) as u8,
        })
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        Self::new(
            n,
            (self.x_mask << other.n_qubits) | other.x_mask,
            (self.z_mask << other.n_qubits) | other.z_mask,
            (self.phase_power + other.phase_power) % 4,
        )
    }

    /// Normalized trace `2^{-n} tr(P)`: nonzero only for the identity word.
    pub fn normalized_trace(&self) -> C64 {
        if self.is_identity_word() {
            phase_value(self.phase_power)
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// The column action: `P|j⟩ = coefficient · |j ⊕ x_mask⟩`.
    #[inline]
    pub fn column(&self, j: usize) -> (usize, C64) {
        let j = j as u64;
        let y_count = (self.x_mask & self.z_mask).count_ones();
        let z_sign = (j & self.z_mask).count_ones();
        let power = (self.phase_power as u32 + y_count + 2 * z_sign) % 4;
        ((j ^ self.x_mask) as usize, phase_value(power as u8))
    }

    /// Applies the word to a state vector of length `2^n`.
    pub fn apply(&self, state: &[C64]) -> Result<Vec<C64>> {
        let dim = 1usize << self.n_qubits;
        if state.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: state.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (j, amp) in state.iter().enumerate() {
            let (row, coeff) = self.column(j);
            out[row] = coeff * amp;
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, state: &[C64]) -> Result<C64> {
        let image = self.apply(state)?;
        Ok(state
            .iter()
            .zip(&image)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_dense(&self) -> DenseOperator {
        let dim = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
        for j in 0..dim {
            let (row, coeff) = self.column(j);
            m[(row, j)] = coeff;
        }
        DenseOperator::from_matrix(m).expect("power-of-two dimension")
    }
}

fn phase_value(power: u8) -> C64 {
    match power % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

impl Mul for PauliTerm {
    type Output = PauliTerm;

    /// Panics on mismatched qubit counts; use [`PauliTerm::multiply`] to get an error instead.
    fn mul(self, rhs: Self) -> Self::Output {
        self.multiply(&rhs).expect("equal qubit counts")
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase_power as usize];
        write!(f, "{prefix}{}", self.word())
    }
}

/// Jordan–Wigner image of the Majorana operator `γ_a`, `a ∈ 1..=2n`.
///
/// `γ_{2j-1} = Z^{⊗(j-1)} ⊗ X ⊗ I^{⊗(n-j)}` and `γ_{2j} = Z^{⊗(j-1)} ⊗ Y ⊗ I^{⊗(n-j)}`.
pub fn majorana(n: usize, a: usize) -> Result<PauliTerm> {
    if n == 0 || n > MAX_QUBITS || a == 0 || a > 2 * n {
        return Err(Error::MajoranaIndex { modes: n, index: a });
    }
    let mode = (a + 1) / 2; // 1-indexed qubit carrying the X/Y
    let site = 1u64 << (n - mode);
    let string = if mode == 1 {
        0
    } else {
        full_mask(mode - 1) << (n - mode + 1)
    };
    let (x, z) = if a % 2 == 1 {
        (site, string)
    } else {
        (site, string | site)
    };
    PauliTerm::new(n, x, z, 0)
}

/// All `2n` Majorana operators, index `a-1` holding `γ_a`.
pub fn majoranas(n: usize) -> Result<Vec<PauliTerm>> {
    (1..=2 * n).map(|a| majorana(n, a)).collect()
}

/// The product `γ_{a_1} γ_{a_2} ⋯` in the given order.
pub fn majorana_monomial(n: usize, indices: &[usize]) -> Result<PauliTerm> {
    indices.iter().try_fold(PauliTerm::identity(n), |acc, &a| {
        acc.multiply(&majorana(n, a)?)
    })
}

/// Hilbert–Schmidt inner product `tr(p† q)`.
pub fn hs_inner(p: &DenseOperator, q: &DenseOperator) -> Result<C64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(p.matrix()
        .iter()
        .zip(q.matrix().iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

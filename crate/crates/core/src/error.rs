use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Majorana index {index} out of range for {modes} modes (valid: 1..={max})", max = 2 * .modes)]
    MajoranaIndex { modes: usize, index: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("Givens rotation needs two distinct Majorana indices, got a = b = {0}")]
    DegenerateGivens(usize),

    #[error("matrix is not orthogonal: |M^T M - 1| = {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    #[error("operator is not unitary: |U^dag U - 1| = {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("synthesized Gaussian unitary misses its target: conjugation residual {residual:.3e}")]
    SynthesisResidual { residual: f64 },

    #[error("correlation matrix has imaginary residue {residue:.3e}")]
    ImaginaryResidue { residue: f64 },

    #[error("correlation matrix singular value {value} exceeds 1")]
    SingularValueRange { value: f64 },

    #[error("mode count {n} exceeds the dense guard of {max}")]
    DimensionGuard { n: usize, max: usize },

    #[error("locality: {0}")]
    Locality(String),

    #[error("invalid shot policy: {0}")]
    InvalidPolicy(String),

    #[error("shot budget {0} exceeds what a single binomial draw can represent")]
    ShotOverflow(u128),

    #[error("SVD reconstruction residual {residual:.3e} exceeds tolerance")]
    SvdResidual { residual: f64 },

    #[error("canonical angles need equal shapes: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("operator is rank deficient (smallest singular value {smallest:.3e})")]
    RankDeficient { smallest: f64 },

    #[error("compressed block is degenerate (norm {norm:.3e}); the unitary is far from the compressed form")]
    DegenerateBlock { norm: f64 },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;

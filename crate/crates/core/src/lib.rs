//! Gaussian-dimension testing and learning for fermionic unitaries.
//!
//! Majorana operators live as symbolic Pauli words under the Jordan–Wigner
//! map; every full-space object is a dense `2^n × 2^n` matrix.

pub mod choi;
pub mod circuit;
pub mod dense;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod majorana;
pub mod metrics;
pub mod protocols;
pub mod spectral;

pub use choi::{
    build_choi_state, estimate_correlation_matrix, shots_for_learner, shots_for_tester, ChoiState,
    CorrelationEstimate, ShotPolicy,
};
pub use circuit::{random_doped_circuit, CircuitFile, DopedCircuit, Layer, LayerRecord};
pub use dense::{DenseOperator, C64};
pub use error::{Error, Result};
pub use gaussian::{
    correlation_matrix_exact, random_orthogonal, synthesize_gaussian, GaussianUnitary,
    GivensStep, OrthogonalMatrix,
};
pub use majorana::{hs_inner, majorana, PauliTerm};
pub use metrics::{diamond_distance_unitaries, frobenius_distance, DistanceReport};
pub use protocols::{
    learn, test_dimension, verify_learning, LearnedDecomposition, LearnerConfig, TesterConfig,
    TesterVerdict, TomographyMode,
};
pub use spectral::{orthogonal_svd, partition_singular_values, PartitionResult, SvdTriple};

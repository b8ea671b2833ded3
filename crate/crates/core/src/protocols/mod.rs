//! The tester and the learner.

pub mod learner;
pub mod tester;
pub mod tomography;

pub use learner::{
    exact_rounding, learn, verify_learning, HybridResiduals, LearnedDecomposition, LearnerConfig,
    LearnerWarning, LearningReport, TomographyMode,
};
pub use tester::{test_dimension, TesterConfig, TesterVerdict};
pub use tomography::{polar_round, traced_block};

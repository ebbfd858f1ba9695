//! Markov chains driven by descent operators (non-negative combinations of
//! convolutions of graded projections) on combinatorial Hopf algebras.
//!
//! The crate builds exact transition matrices for card shuffles on the
//! shuffle algebra and for vertex-removal chains on rooted forests, and
//! analyses them with exact rational arithmetic: spectra, stationary
//! distributions, eigenvector constructions, expectations and lumpings.
//! A seeded Monte Carlo layer cross-checks the exact results.

pub mod chain;
pub mod combinat;
pub mod error;
pub mod exactmath;
pub mod forest;
pub mod hopf;
pub mod par;
pub mod presets;
pub mod shuffle;
pub mod simulate;
pub mod spectral;

pub use error::{Error, Result};
pub use exactmath::{RatMatrix, Rational};
pub use hopf::{CppSpec, HopfAlgebra, LinComb, TensorComb};
pub use chain::{build_transition_matrix, Distribution, TransitionMatrix};
pub use par::Exec;
pub use presets::Preset;
pub use spectral::Spectrum;

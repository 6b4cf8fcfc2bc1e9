//! Generalized Bell-type entanglement witnesses on simulated QAOA-MaxCut
//! states: observable construction, analytic and numerical evaluation,
//! separable-bound certification, entanglement-potency estimation, and
//! single-qubit tomography with depolarizing-noise fitting.
//!
//! Conventions used throughout:
//! - little-endian qubit order (qubit `q` is bit `q` of a basis index);
//! - angles in radians;
//! - every randomized operation takes an explicit seed and derives
//!   per-sample substreams, so results are independent of thread schedule.

pub mod analytic;
pub mod certify;
pub mod error;
pub mod opt;
pub mod pauli;
pub mod potency;
pub mod rng;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};

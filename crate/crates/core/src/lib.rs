//! Hilbert-space analysis of the four-outcome consistency paradox.
//!
//! Three zero-probability statements about outcomes `(a,0)`, `(0,a)` and
//! `(1,1)` would, under non-contextual logic, forbid the outcome `(a,a)`:
//! `P_WW(a,a) ≤ P_S = P_WF(a,0) + P_FW(0,a) + P_FF(1,1)`. This crate builds
//! the states and operators involved, evaluates the analytic lower bounds
//! on `P_WW(a,a)` as a function of `P_S`, computes the exact frontier
//! numerically, and samples the measurement statistics.
//!
//! Module map:
//!
//! - [`linalg`]: complex vectors and matrices up to dimension 4, Jacobi eigensolver
//! - [`hilbert`]: named states, Born probabilities, inequality slack
//! - [`spectral`]: the probability-sum operator and its eigenbasis coefficients
//! - [`bounds`]: closed-form bounds and landmark constants
//! - [`optimizer`]: numerical frontier (θ-family and full state space)
//! - [`montecarlo`]: seeded shot sampling of the four contexts
//! - [`cli`]: the `ctx` command-line front end

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exec;
pub mod format;
pub mod hilbert;
pub mod linalg;
pub mod montecarlo;
pub mod optimizer;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Exec;
pub use hilbert::{ContextProbabilities, Qubit, StateVector};
pub use linalg::{CMatrix, CVector, Complex, SpectralDecomposition};
pub use optimizer::{FrontierPoint, OptimizerConfig};
pub use spectral::{NuCoefficients, PiS};

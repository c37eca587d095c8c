//! Statevector workbench for two-player oracle games: explicit query
//! programs over a setting/argument/workspace register split, time-symmetric
//! sharing-pair analysis of the transcripts, and a query-count prediction
//! rule read off the shared data.

pub mod algorithms;
pub mod bits;
pub mod complexity;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod rule;
pub mod state;
pub mod symmetry;

pub use algorithms::{RNG_NAME, STATE_TOL, SUCCESS_TOL};
pub use bits::BitString;
pub use error::{Error, Result};

/// Permitted norm loss per applied operator.
pub const NORM_DRIFT_PER_OP: f64 = 1e-12;

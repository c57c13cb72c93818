//! Partition-free pathwise quantities for sampled càdlàg paths.
//!
//! Truncated variation, the play-operator envelope, interval-crossing counts,
//! the bracket `<x>` obtained from finite-variation approximants, and the
//! integrals built on them. Every quantity is computed exactly for the
//! piecewise-constant extension of the samples.

pub mod crossings;
pub mod error;
pub mod follmer;
pub mod harness;
pub mod oracle;
pub mod path;
pub mod simulate;
pub mod skorohod;
pub mod stieltjes;
pub mod sum;
pub mod variation;

pub use error::{Error, Result};
pub use path::{CadlagPath, Jump, JumpDesignation, JumpList};
pub use variation::{TruncationParam, VariationProcess, VariationTriple};

//! Exact Bayesian inference for the Bingham distribution on the unit sphere.
//!
//! * [`samplers`] draws exact Bingham variates by rejection from an angular
//!   central Gaussian envelope.
//! * [`inference`] runs the exchange algorithm over the ordered
//!   concentrations; the intractable normalising constant is never evaluated.
//! * [`oracle`] evaluates that constant by brute-force quadrature for `q ≤ 3`,
//!   for testing only.
//! * [`diagnostics`] summarises chains and compares two posteriors.

pub mod diagnostics;
pub mod error;
pub mod inference;
pub mod model;
pub mod oracle;
pub mod samplers;

pub use diagnostics::{RegionTestResult, SummaryReport};
pub use error::{BinghamError, Result};
pub use inference::{Chain, ChainConfig, PriorSpec};
pub use model::{LambdaVector, SufficientStats, SymmetricMatrix, UnitVector};
pub use samplers::{BPolicy, EnvelopeParams, RngState};

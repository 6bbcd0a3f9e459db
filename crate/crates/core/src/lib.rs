//! Random permutation sets and their maximum entropy.
//!
//! A random permutation set pairs the *permutation event space* of a frame
//! (every ordered tuple of distinct elements) with a *permutation mass
//! function* over it. This crate provides:
//!
//! - [`combinatorics`]: exact counts `P(n, i)`, `C(n, i)`, `F(i)` and the
//!   maximum-entropy normalizers as [`BigCount`]s.
//! - [`pes`]: frames, events and lazy enumeration of the event space.
//! - [`mass`]: PMFs, classical mass functions, probability distributions,
//!   validation and the order-forgetting / singleton projections.
//! - [`entropy`]: Shannon, Deng and RPS entropies, their closed-form maxima
//!   and maximizing distributions.
//! - [`verifier`]: a projected-gradient optimizer and a random-search oracle
//!   that check the closed-form RPS maximum numerically.
//! - [`document`]: the JSON input/output schemas.
//!
//! ```
//! use rps_core::{entropy, Frame, LogBase};
//!
//! let frame = Frame::new(["R", "B", "G"]).unwrap();
//! let pmf = entropy::max_rps_pmf(&frame).unwrap();
//! let h = entropy::rps_entropy(&pmf, LogBase::BINARY).value;
//! assert_eq!(format!("{h:.4}"), "6.8704");
//! ```

pub mod combinatorics;
pub mod document;
pub mod entropy;
pub mod error;
pub mod mass;
pub mod pes;
pub mod verifier;

pub use combinatorics::BigCount;
pub use document::{MassDocument, RpsDocument};
pub use entropy::{EntropyReport, EntropyTerm, LogBase};
pub use error::{Error, Result};
pub use mass::{MassFunction, PermutationMassFunction, ProbabilityDistribution, ValidationReport};
pub use pes::{Frame, PermutationEvent, Subset};
pub use verifier::{OptimizerConfig, VerificationResult};

//! Small image-to-image networks and the tooling needed to study how they
//! respond to bounded input perturbations: quality metrics, frequency-domain
//! helpers, attack loops, and input-side defenses.
//!
//! Everything is f64 on the [0, 255] pixel scale and deterministic: the same
//! seeds produce the same bytes on every platform.

pub mod attacks;
pub mod dataset;
pub mod defenses;
pub mod error;
pub mod frequency;
pub mod metrics;
pub mod models;
pub mod netpbm;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use rng::Rng;
pub use tensor::Tensor;

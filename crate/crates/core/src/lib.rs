//! Recovery of the hidden column order of a noisy matrix whose rows are
//! monotone after unshuffling.
//!
//! Given observations `Y = Theta * Pi + Z` — a nonnegative signal matrix
//! `Theta` with nondecreasing rows, an unknown column permutation `Pi`, and
//! additive noise `Z` — the crate estimates the permutation, scores the
//! estimate against the truth, and benchmarks estimators under simulation:
//!
//! * [`perm`] / [`matrix`]: permutation algebra, the ranking operator, and
//!   validated data matrices;
//! * [`metrics`]: 0-1 loss, normalized Kendall tau (with a brute-force
//!   cross-check), normalized footrule, and reversal-aware evaluation;
//! * [`spectra`]: row centering, the projection Gram matrix, dominant
//!   eigenpairs, and top-k singular triplets by deflated power iteration;
//! * [`estimators`]: the best-linear-projection estimator, mean/max
//!   baselines, an uncentered SVD variant, and per-sample peak-to-trough
//!   ratios from the recovered order;
//! * [`models`]: signal generators, their signal-strength quantities, a
//!   qualitative risk-bound curve, and near-threshold adversarial instances;
//! * [`harness`]: a deterministic, parallel Monte Carlo runner with CSV,
//!   JSON, and markdown emitters.
//!
//! The numeric kernels are generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the aliases below fix `f64`, which is what the harness
//! and the command-line tool use.
//!
//! ```
//! use permrec::{estimators, models, perm::Permutation, rng::SimRng};
//!
//! // A noiseless linear signal, shuffled, is recovered exactly (up to the
//! // inherent direction ambiguity).
//! let spec = models::LinearGrowthSpec::new(
//!     vec![1.0, 2.0],
//!     vec![0.5, 0.0],
//!     vec![0.0, 0.4, 1.1, 3.0],
//! )
//! .unwrap();
//! let theta = models::generate_linear(&spec).unwrap();
//! let truth = Permutation::random(theta.p(), &mut SimRng::new(7));
//! let shuffled = theta.apply_columns(&truth).unwrap();
//! let out = estimators::estimate_blp(&shuffled, 1e-10).unwrap();
//! assert!(out.permutation == truth || out.permutation == truth.reverse());
//! ```

pub mod error;
pub mod estimators;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod models;
pub mod perm;
pub mod rng;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use matrix::DataMatrix;
pub use perm::{rank_of, Permutation};
pub use scalar::Scalar;

/// `f64` data matrix, the working type of the harness and CLI.
pub type Matrix = DataMatrix<f64>;
/// `f64` eigenpair.
pub type Eigen = spectra::EigenResult<f64>;
/// `f64` singular triplets.
pub type Svd = spectra::SvdTriplets<f64>;
/// `f64` recovery output.
pub type Recovery = estimators::RecoveryOutput<f64>;
/// `f64` linear growth specification.
pub type LinearSpec = models::LinearGrowthSpec<f64>;
/// `f64` signal-strength quantities.
pub type Quantities = models::SignalQuantities<f64>;

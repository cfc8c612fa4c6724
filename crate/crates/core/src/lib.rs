//! Maximum-likelihood estimation for k-component parallel load-sharing systems.
//!
//! Two models are supported:
//!
//! * **Kim–Kvam**: every stage has a constant hazard. During stage `j`
//!   (between the `(j-1)`-th and `j`-th failure) each of the `k-j+1`
//!   survivors fails at rate `λ_{j-1}·θ`, with `λ_0 = 1`.
//! * **Singh–Sharma–Kumar (SSK)**: stages `1..=s` behave as above; stages
//!   `j > s` have a linearly increasing hazard `λ_{j-1}·θ·t`, where `t` is
//!   the time elapsed since the previous failure.
//!
//! Both likelihoods depend on the data only through per-stage column sums, and
//! the maximum-likelihood estimates are ratios of those sums
//! ([`estimator::closed_form_mle`]). [`oracle::numeric_mle`] is an
//! independent derivative-free maximizer used to check them, and
//! [`simulator`] draws synthetic data from either model.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_debug_implementations)]

extern crate alloc;

mod error;
mod sum;

pub mod estimator;
pub mod model;
pub mod oracle;
pub mod simulator;

pub use error::{Error, Result};
pub use estimator::{closed_form_mle, sufficient_stats, FitMethod, FitResult, SufficientStats};
pub use model::{
    log_likelihood, score, spacings_from_lifetimes, y_transform, Matrix, ModelKind, ModelSpec,
    Params, SpacingsMatrix,
};
pub use oracle::{fd_gradient, numeric_mle, OracleConfig};
pub use simulator::{
    mc_study, sample_dataset, sample_system, McSummary, RngState, ValidationInstance,
};

//! Pressure functions of the Gauss map restricted to the alphabet `{1..M}`.
//!
//! Two independent routes to the same quantities:
//!
//! * [`direct`] enumerates all `M^n` words and sums `exp(n·α(s))·q_n^{-2s}`
//!   exactly; its `n`-th root tends to the leading eigenvalue.
//! * [`spectral`] discretizes the weighted transfer operator and reads the
//!   pressure off its leading eigenvalue.
//!
//! Roots of either in `s` give the finite-alphabet dimensional numbers.

pub mod direct;
pub mod extrapolate;
pub mod potential;
pub mod spectral;

pub use direct::{direct_sum, root_finite, root_finite_with, RootConfig, SumQuery, DEFAULT_BUDGET};
pub use extrapolate::{extrapolate_alphabet, Extrapolation, LadderEntry};
pub use potential::Potential;
pub use spectral::{dim_root, dim_ladder, spectral_eigenvalue, SpectralConfig};

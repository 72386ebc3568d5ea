//! Implicit reparameterization gradients.
//!
//! Pathwise derivative estimators for distributions whose standardization
//! functions are only numerically tractable: Gamma, Beta, Dirichlet,
//! Student-t, von Mises, truncated and mixture families. Instead of
//! inverting a standardization function, the sample gradient is obtained by
//! implicit differentiation,
//!
//! ```text
//! dz/dphi = -(dS/dz)^-1 dS/dphi,
//! ```
//!
//! which for a univariate CDF standardization reduces to
//! `dz/dphi = -(dF(z|phi)/dphi) / q(z|phi)`. The CDF parameter derivatives
//! come from forward-mode differentiation of the numerical CDF routines.
//!
//! Crate layout:
//!
//! * [`dual`] — scalar forward-mode AD and the precision abstraction;
//! * [`special`] — incomplete gamma, von Mises CDF, Bessel, erf, digamma,
//!   log-densities, all generic over duals;
//! * [`oracle`] — slow high-precision reference derivatives and the
//!   benchmark evaluation grid;
//! * [`dist`] — samplers plus implicit-gradient Jacobians per family;
//! * [`estimators`] — Monte Carlo gradient estimators, variance
//!   measurement and the cross-entropy toy problems;
//! * [`report`] — deterministic CSV/JSON report files for the CLI.

pub mod dist;
pub mod dual;
pub mod estimators;
pub mod oracle;
pub mod report;
pub mod special;

pub use dual::{Dual, Real, Scalar};

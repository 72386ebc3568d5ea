//! Numerically tractable CDFs, log-densities and helper special functions.
//!
//! The CDF kernels are generic over [`crate::dual::Scalar`], so the same
//! code path produces plain values on `f32`/`f64` and parameter derivatives
//! on `Dual<f32>`/`Dual<f64>`.

mod bessel;
mod erf;
mod gamma;
mod log_pdf;
mod von_mises;

pub use bessel::{bessel_i, bessel_i0e, bessel_i_ratio, bessel_i_scaled};
pub use erf::{erf, erfc, normal_cdf, normal_quantile};
pub use gamma::{
    digamma, lgamma, reg_inc_gamma, reg_inc_gamma_dalpha_ad, reg_inc_gamma_dalpha_stable,
    trigamma,
};
pub use log_pdf::{
    log_pdf_beta, log_pdf_dirichlet, log_pdf_gamma, log_pdf_normal, log_pdf_student_t,
    log_pdf_von_mises, score,
};
pub use von_mises::{von_mises_cdf, von_mises_cdf_dkappa_ad, von_mises_pdf};

use std::fmt;

use crate::dual::Real;

/// Iteration control for the differentiated CDF kernels.
///
/// The stopping test watches the running derivative, not the CDF value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationBudget {
    pub max_iters: usize,
    pub tan_tolerance: f64,
}

impl IterationBudget {
    /// Budget for a given working precision: 200 iterations in single
    /// precision, 500 in double.
    pub fn for_precision<R: Real>() -> Self {
        IterationBudget {
            max_iters: R::MAX_CDF_ITERS,
            tan_tolerance: R::tan_tolerance().to_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecialError {
    /// Input outside the kernel's domain (NaN inputs land here, never
    /// propagate silently).
    Domain { op: &'static str, detail: String },
    /// Iteration budget exhausted; carries the last iterate.
    Convergence {
        op: &'static str,
        iters: usize,
        last: f64,
    },
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialError::Domain { op, detail } => write!(f, "{op}: domain error: {detail}"),
            SpecialError::Convergence { op, iters, last } => {
                write!(f, "{op}: no convergence after {iters} iterations (last iterate {last})")
            }
        }
    }
}

impl std::error::Error for SpecialError {}

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> SpecialError {
    SpecialError::Domain {
        op,
        detail: detail.into(),
    }
}

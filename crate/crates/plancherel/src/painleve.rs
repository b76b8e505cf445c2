//! The Painlevé II family `u(x;t)`, the Tracy-Widom distribution `F(x;t)`,
//! the second-eigenvalue distribution `F⁽²⁾`, and their moments.
//!
//! The solution branch fixed by `u(x;t) ~ −√t·Ai(x)` as `x → +∞` is
//! integrated downward from deep inside the Airy regime together with its
//! variational derivative in `t` and the running integrals the distribution
//! functions need; everything downstream is quadrature on the recorded
//! solution.

pub mod airy;
pub mod cdf;
mod dd;
pub mod ode;

pub use airy::{airy_ai, airy_ai_prime};
pub use cdf::{
    airy_tail_integrals, dfdt_finite_difference, distribution_moments, f2_cdf, tw_cdf,
    tw_cdf_with_control, CdfTable,
};
pub use ode::{ode_residual_max, solve_pii, PiiSolution, StepControl};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PainleveError {
    #[error("t must lie in (0, 1], got {0}")]
    InvalidT(f64),
    #[error("integration range [{x_end}, {x_start}] is not supported: {reason}")]
    BadRange {
        x_start: f64,
        x_end: f64,
        reason: &'static str,
    },
    #[error("step size collapsed at x = {x:.6} (left the connection branch)")]
    StepCollapse { x: f64 },
    #[error("grid is empty or contains non-finite points")]
    BadGrid,
    #[error("finite-difference offset must lie in (0, 1/4], got {0}")]
    BadOffset(f64),
    #[error("distribution tail unresolved at the grid ends (F = {0:.3e} / {1:.3e})")]
    UnresolvedTail(f64, f64),
}

//! Special functions of real argument: Kummer's `1F1`, the Hermite function
//! `H_ν` of arbitrary real order with its derivative, and `log|Γ|`.
//!
//! Every evaluation reports an error estimate. Sums whose running condition
//! number `Σ|term| / |Σ term|` exceeds 1e4 are recomputed in double-double
//! arithmetic, and results that still miss a relative accuracy of 1e-12 are
//! returned as [`Error::Precision`](crate::Error::Precision).

pub mod dd;
pub mod gamma;
pub mod hermite;
pub mod kummer;

pub use gamma::log_gamma_real;
pub use hermite::{hermite_h, hermite_h_deriv};
pub use kummer::{kummer_1f1, kummer_1f1_direct};

/// A special-function value with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    /// Whether double-double arithmetic was needed.
    pub escalated: bool,
}

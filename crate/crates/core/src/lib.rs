//! Hurwitz and Lerch zeta-functions through their approximate functional
//! equations.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`]: overflow-safe log-Gamma, the χ-factor and the
//!   `Γ(1−s)(2π)^{s−1}e^{(as+b)πi}` products that glue the dual sums together.
//! * [`oracle`]: slow but independent evaluators (direct series,
//!   Euler–Maclaurin, rational-λ decomposition) used as ground truth.
//! * [`afe`]: the approximate functional equations for ζ_L, ζ_H and ζ,
//!   split selection, error envelopes and their calibration.
//! * [`functional`]: numerical verification of the exact functional
//!   equations.
//! * [`mean_square`]: ∫|ζ_L(1/2+it, α, λ)|² dt against `T log(T/2π)`.
//!
//! Argument order is `(s, α, λ)` everywhere:
//! `ζ_L(s, α, λ) = Σ_{n≥0} e^{2πinλ} (n+α)^{−s}`.

pub mod afe;
pub mod complex;
mod error;
pub mod functional;
pub mod mean_square;
pub mod oracle;
pub mod par;
mod params;
pub mod report;

pub use afe::{
    afe_hurwitz, afe_lerch, afe_riemann, choose_split, error_envelope, AfeEngine, AfeSplit,
    Calibration, EnvelopeKind, ErrorEnvelope, SplitMode,
};
pub use complex::{chi, gamma, gamma_phase_product, log_gamma, ComplexPoint, LogComplex};
pub use error::{Result, ZetaError};
pub use oracle::{
    hurwitz_euler_maclaurin, lerch_direct, lerch_via_hurwitz, riemann_reference,
    EulerMaclaurinConfig,
};
pub use par::Exec;
pub use params::{LerchParams, Rational};

pub use num_complex::Complex64;

/// Value of a zeta evaluation together with its a-posteriori error estimate
/// and the number of terms it cost.
///
/// For the approximate functional equations `main_terms` counts the first sum
/// and `dual_terms` the index range shared by the dual sums. For the
/// Euler–Maclaurin oracles `main_terms` is the direct-sum length and
/// `dual_terms` the number of Bernoulli corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub main_terms: usize,
    pub dual_terms: usize,
    pub reliable: bool,
}

impl EvalResult {
    pub fn conj(self) -> Self {
        EvalResult {
            value: self.value.conj(),
            ..self
        }
    }
}

//! Approximate functional equations.
//!
//! For `0 ≤ σ ≤ 1`, `x, y ≥ 1` and `2πxy = |t|`:
//!
//! ```text
//! ζ_L(s,α,λ) = Σ_{0≤n≤x} e^{2πinλ}(n+α)^{−s}
//!            + Γ(1−s)(2π)^{s−1} { e^{((1−s)/2 − 2αλ)πi}  Σ_{0≤n≤y} e^{2πin(1−α)}(n+λ)^{s−1}
//!                                + e^{(−(1−s)/2 + 2α(1−λ))πi} Σ_{0≤n≤y} e^{2πinα}(n+1−λ)^{s−1} }
//!            + O(x^{−σ}) + O(|t|^{1/2−σ} y^{σ−1})            (0 < λ < 1)
//!
//! ζ_H(s,α)   = Σ_{0≤n≤x} (n+α)^{−s}
//!            + Γ(1−s)(2π)^{s−1} { e^{(1−s)πi/2}  Σ_{1≤n≤y} e^{2πin(1−α)} n^{s−1}
//!                                + e^{−(1−s)πi/2} Σ_{1≤n≤y} e^{2πinα} n^{s−1} }
//!            + O(x^{−σ}) + O(|t|^{1−σ} y^{σ−1})
//!
//! ζ(s)       = Σ_{n≤x} n^{−s} + χ(s) Σ_{n≤y} n^{s−1} + O(x^{−σ}) + O(|t|^{1/2−σ} y^{σ−1})
//! ```
//!
//! Sums over `n ≤ x` include `n = ⌊x⌋`. The formulas are evaluated for
//! `t > 0`; negative heights go through `ζ_L(s̄, α, 1−λ) = conj ζ_L(s, α, λ)`.
//! The O-constants are not known in closed form; [`Calibration`] holds
//! empirically fitted multipliers `C_fit` for the envelopes.

mod calibration;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{chi, gamma_phase_product, real_pow_neg, unit_phase, ComplexPoint};
use crate::error::{Result, ZetaError};
use crate::oracle::lerch_oracle;
use crate::par::Exec;
use crate::params::LerchParams;
use crate::EvalResult;

pub use calibration::{
    calibration_grid, Calibration, CALIBRATION_HEIGHTS, CALIBRATION_SIGMAS,
};

/// Relative tolerance on `2πxy = |t|`.
pub const SPLIT_TOLERANCE: f64 = 1e-12;

/// The pair `(x, y)`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfeSplit {
    x: f64,
    y: f64,
}

impl AfeSplit {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && x >= 1.0 && y >= 1.0) {
            return Err(ZetaError::domain(format!(
                "split needs x >= 1 and y >= 1, got x = {x}, y = {y}"
            )));
        }
        Ok(AfeSplit { x, y })
    }

    /// The split with the given `y` and `x = |t|/(2πy)`.
    pub fn with_y(t: f64, y: f64) -> Result<Self> {
        Self::new(t.abs() / (2.0 * PI * y), y)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    /// Checks `2πxy = |t|` to [`SPLIT_TOLERANCE`].
    pub fn check(&self, t: f64) -> Result<()> {
        let prod = 2.0 * PI * self.x * self.y;
        if (prod - t.abs()).abs() > SPLIT_TOLERANCE * t.abs().max(f64::MIN_POSITIVE) {
            return Err(ZetaError::domain(format!(
                "split violates 2*pi*x*y = |t|: 2*pi*{}*{} = {prod} but |t| = {}",
                self.x,
                self.y,
                t.abs()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SplitMode {
    /// `x = y = √(|t|/2π)`.
    Balanced,
    /// `y = √(log t)`, `x = t/(2π√(log t))`, the split used for mean squares.
    MeanSquare,
    /// `y = k·√(|t|/2π)`.
    Scaled(f64),
}

impl fmt::Display for SplitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitMode::Balanced => f.write_str("balanced"),
            SplitMode::MeanSquare => f.write_str("meansquare"),
            SplitMode::Scaled(k) => write!(f, "scaled:{k}"),
        }
    }
}

impl FromStr for SplitMode {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "balanced" => Ok(SplitMode::Balanced),
            "meansquare" | "mean-square" | "mean_square" => Ok(SplitMode::MeanSquare),
            "skew-low" => Ok(SplitMode::Scaled(0.5)),
            "skew-high" => Ok(SplitMode::Scaled(2.0)),
            other => match other.strip_prefix("scaled:") {
                Some(k) => k
                    .parse::<f64>()
                    .ok()
                    .filter(|k| k.is_finite() && *k > 0.0)
                    .map(SplitMode::Scaled)
                    .ok_or_else(|| ZetaError::Parse(format!("bad split scale '{k}'"))),
                None => Err(ZetaError::Parse(format!("unknown split mode '{s}'"))),
            },
        }
    }
}

pub fn choose_split(t: f64, mode: SplitMode) -> Result<AfeSplit> {
    let height = t.abs();
    if !(height >= 2.0 * PI) {
        return Err(ZetaError::domain(format!(
            "|t| = {height} < 2*pi: no split with x >= 1 and y >= 1"
        )));
    }
    let root = (height / (2.0 * PI)).sqrt();
    match mode {
        SplitMode::Balanced => AfeSplit::new(root, root),
        SplitMode::Scaled(k) => AfeSplit::with_y(height, k * root),
        SplitMode::MeanSquare => {
            let log_t = height.ln();
            if log_t < 1.0 {
                return Err(ZetaError::domain(format!(
                    "mean-square split needs log t >= 1, got t = {height}"
                )));
            }
            AfeSplit::with_y(height, log_t.sqrt())
        }
    }
}

/// Which error envelope applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Lerch,
    Hurwitz,
    Riemann,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 3] = [EnvelopeKind::Lerch, EnvelopeKind::Hurwitz, EnvelopeKind::Riemann];

    /// The formula for these parameters: Lerch for `λ < 1`, Hurwitz for
    /// `λ = 1`. Riemann is never chosen; it must be asked for.
    pub fn for_params(params: &LerchParams) -> Self {
        if params.is_hurwitz() {
            EnvelopeKind::Hurwitz
        } else {
            EnvelopeKind::Lerch
        }
    }

    /// Whether this formula can evaluate ζ_L at `params`.
    pub fn accepts(&self, params: &LerchParams) -> bool {
        match self {
            EnvelopeKind::Lerch => !params.is_hurwitz(),
            EnvelopeKind::Hurwitz => params.is_hurwitz(),
            EnvelopeKind::Riemann => params.is_hurwitz() && params.alpha() == 1.0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EnvelopeKind::Lerch => "lerch",
            EnvelopeKind::Hurwitz => "hurwitz",
            EnvelopeKind::Riemann => "riemann",
        }
    }
}

impl fmt::Display for EnvelopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvelopeKind {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lerch" => Ok(EnvelopeKind::Lerch),
            "hurwitz" => Ok(EnvelopeKind::Hurwitz),
            "riemann" => Ok(EnvelopeKind::Riemann),
            _ => Err(ZetaError::Parse(format!("unknown envelope kind '{s}'"))),
        }
    }
}

/// The two O-terms with unit constants: `x^{−σ}` and `|t|^e y^{σ−1}`, where
/// `e = 1/2 − σ` for Lerch/Riemann and `e = 1 − σ` for Hurwitz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEnvelope {
    pub kind: EnvelopeKind,
    pub term1: f64,
    pub term2: f64,
}

impl ErrorEnvelope {
    pub fn total(&self) -> f64 {
        self.term1 + self.term2
    }
}

pub fn error_envelope(kind: EnvelopeKind, s: ComplexPoint, split: AfeSplit) -> ErrorEnvelope {
    let sigma = s.sigma();
    let exponent = match kind {
        EnvelopeKind::Hurwitz => 1.0 - sigma,
        EnvelopeKind::Lerch | EnvelopeKind::Riemann => 0.5 - sigma,
    };
    ErrorEnvelope {
        kind,
        term1: split.x.powf(-sigma),
        term2: s.t().abs().powf(exponent) * split.y.powf(sigma - 1.0),
    }
}

/// A bare AFE value with its term counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeValue {
    pub value: Complex64,
    pub main_terms: usize,
    pub dual_terms: usize,
}

impl AfeValue {
    fn conj(self) -> Self {
        AfeValue {
            value: self.value.conj(),
            ..self
        }
    }
}

fn check_strip(s: ComplexPoint, split: AfeSplit) -> Result<()> {
    if !(0.0..=1.0).contains(&s.sigma()) {
        return Err(ZetaError::domain(format!(
            "sigma = {} outside [0, 1]",
            s.sigma()
        )));
    }
    split.check(s.t())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ZetaError::domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

/// `Σ_{0≤n≤m} e^{2πinλ}(n+α)^{−s}`.
pub(crate) fn first_sum(z: Complex64, alpha: f64, lambda: f64, m: usize) -> (Complex64, usize) {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..=m {
        let term = real_pow_neg(n as f64 + alpha, z);
        sum += if lambda == 1.0 {
            term
        } else {
            unit_phase(n as f64 * lambda) * term
        };
    }
    (sum, m + 1)
}

/// Term counts `(⌊x⌋, ⌊y⌋)`; the formulas depend on the split only through
/// these.
fn counts(split: AfeSplit) -> (usize, usize) {
    (split.x.floor() as usize, split.y.floor() as usize)
}

fn lerch_upper(s: ComplexPoint, alpha: f64, lambda: f64, (m, k): (usize, usize)) -> Result<AfeValue> {
    let z = s.to_complex();
    let w = 1.0 - z;
    let (first, main_terms) = first_sum(z, alpha, lambda, m);
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d2 = Complex64::new(0.0, 0.0);
    for n in 0..=k {
        let nf = n as f64;
        d1 += unit_phase(nf * (1.0 - alpha)) * real_pow_neg(nf + lambda, w);
        d2 += unit_phase(nf * alpha) * real_pow_neg(nf + 1.0 - lambda, w);
    }
    let g1 = gamma_phase_product(s, -0.5, 0.5 - 2.0 * alpha * lambda)?.to_complex();
    let g2 = gamma_phase_product(s, 0.5, -0.5 + 2.0 * alpha * (1.0 - lambda))?.to_complex();
    Ok(AfeValue {
        value: first + g1 * d1 + g2 * d2,
        main_terms,
        dual_terms: k + 1,
    })
}

fn hurwitz_upper(s: ComplexPoint, alpha: f64, (m, k): (usize, usize)) -> Result<AfeValue> {
    let z = s.to_complex();
    let w = 1.0 - z;
    let (first, main_terms) = first_sum(z, alpha, 1.0, m);
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d2 = Complex64::new(0.0, 0.0);
    for n in 1..=k {
        let nf = n as f64;
        let p = real_pow_neg(nf, w);
        d1 += unit_phase(nf * (1.0 - alpha)) * p;
        d2 += unit_phase(nf * alpha) * p;
    }
    let g1 = gamma_phase_product(s, -0.5, 0.5)?.to_complex();
    let g2 = gamma_phase_product(s, 0.5, -0.5)?.to_complex();
    Ok(AfeValue {
        value: first + g1 * d1 + g2 * d2,
        main_terms,
        dual_terms: k,
    })
}

fn riemann_upper(s: ComplexPoint, (m, k): (usize, usize)) -> Result<AfeValue> {
    let z = s.to_complex();
    let w = 1.0 - z;
    // The α = 1 first sum: Σ_{0≤n≤x} (n+1)^{−s}.
    let (first, main_terms) = first_sum(z, 1.0, 1.0, m);
    let mut dual = Complex64::new(0.0, 0.0);
    for n in 1..=k {
        dual += real_pow_neg(n as f64, w);
    }
    let c = chi(s)?.to_complex();
    Ok(AfeValue {
        value: first + c * dual,
        main_terms,
        dual_terms: k,
    })
}

/// Lerch AFE without an error estimate.
pub fn afe_lerch_value(s: ComplexPoint, params: LerchParams, split: AfeSplit) -> Result<AfeValue> {
    check_strip(s, split)?;
    check_alpha(params.alpha())?;
    if params.is_hurwitz() {
        return Err(ZetaError::domain("lambda=1 requires hurwitz AFE"));
    }
    let (alpha, lambda) = (params.alpha(), params.lambda());
    if s.t() < 0.0 {
        let flipped = match params.exact() {
            Some((_, l)) => l.complement().value(),
            None => 1.0 - lambda,
        };
        lerch_upper(s.conj(), alpha, flipped, counts(split)).map(AfeValue::conj)
    } else {
        lerch_upper(s, alpha, lambda, counts(split))
    }
}

/// Hurwitz AFE without an error estimate.
pub fn afe_hurwitz_value(s: ComplexPoint, alpha: f64, split: AfeSplit) -> Result<AfeValue> {
    check_strip(s, split)?;
    check_alpha(alpha)?;
    if s.t() < 0.0 {
        hurwitz_upper(s.conj(), alpha, counts(split)).map(AfeValue::conj)
    } else {
        hurwitz_upper(s, alpha, counts(split))
    }
}

/// Riemann AFE without an error estimate. The first sum runs over
/// `(n+1)^{−s}`, `0 ≤ n ≤ x`, which makes it the `α = 1` case of the
/// Hurwitz formula term for term.
pub fn afe_riemann_value(s: ComplexPoint, split: AfeSplit) -> Result<AfeValue> {
    check_strip(s, split)?;
    if s.t() < 0.0 {
        riemann_upper(s.conj(), counts(split)).map(AfeValue::conj)
    } else {
        riemann_upper(s, counts(split))
    }
}

/// Evaluates ζ_L at `params` with the formula of `kind`.
pub fn afe_value(kind: EnvelopeKind, s: ComplexPoint, params: LerchParams, split: AfeSplit) -> Result<AfeValue> {
    if kind != EnvelopeKind::Lerch && !kind.accepts(&params) {
        return Err(ZetaError::domain(format!("the {kind} AFE does not apply to {params}")));
    }
    match kind {
        EnvelopeKind::Lerch => afe_lerch_value(s, params, split),
        EnvelopeKind::Hurwitz => afe_hurwitz_value(s, params.alpha(), split),
        EnvelopeKind::Riemann => afe_riemann_value(s, split),
    }
}

/// The AFE for `t > 0` with explicit term counts `(⌊x⌋, ⌊y⌋)`. Used where
/// the counts are known to be constant on an interval.
pub(crate) fn afe_with_counts(
    kind: EnvelopeKind,
    s: ComplexPoint,
    params: LerchParams,
    counts: (usize, usize),
) -> Result<Complex64> {
    debug_assert!(s.t() > 0.0 && kind.accepts(&params));
    let v = match kind {
        EnvelopeKind::Lerch => lerch_upper(s, params.alpha(), params.lambda(), counts)?,
        EnvelopeKind::Hurwitz => hurwitz_upper(s, params.alpha(), counts)?,
        EnvelopeKind::Riemann => riemann_upper(s, counts)?,
    };
    Ok(v.value)
}

/// AFE evaluation with calibrated error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AfeEngine {
    calibration: Calibration,
}

impl Default for AfeEngine {
    fn default() -> Self {
        AfeEngine::builtin().clone()
    }
}

impl AfeEngine {
    pub fn new(calibration: Calibration) -> Self {
        AfeEngine { calibration }
    }

    /// The engine backed by [`Calibration::builtin`].
    pub fn builtin() -> &'static AfeEngine {
        static ENGINE: OnceLock<AfeEngine> = OnceLock::new();
        ENGINE.get_or_init(|| AfeEngine::new(Calibration::builtin()))
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    fn finish(&self, kind: EnvelopeKind, s: ComplexPoint, split: AfeSplit, v: AfeValue) -> EvalResult {
        let envelope = error_envelope(kind, s, split).total();
        let (error_estimate, reliable) = match self.calibration.get(kind) {
            Some(c) => (c * envelope, true),
            None => (f64::INFINITY, false),
        };
        EvalResult {
            value: v.value,
            error_estimate,
            main_terms: v.main_terms,
            dual_terms: v.dual_terms,
            reliable,
        }
    }

    pub fn afe_lerch(&self, s: ComplexPoint, params: LerchParams, split: AfeSplit) -> Result<EvalResult> {
        let v = afe_lerch_value(s, params, split)?;
        Ok(self.finish(EnvelopeKind::Lerch, s, split, v))
    }

    pub fn afe_hurwitz(&self, s: ComplexPoint, alpha: f64, split: AfeSplit) -> Result<EvalResult> {
        let v = afe_hurwitz_value(s, alpha, split)?;
        Ok(self.finish(EnvelopeKind::Hurwitz, s, split, v))
    }

    pub fn afe_riemann(&self, s: ComplexPoint, split: AfeSplit) -> Result<EvalResult> {
        let v = afe_riemann_value(s, split)?;
        Ok(self.finish(EnvelopeKind::Riemann, s, split, v))
    }

    /// ζ_L through the formula of `kind`.
    pub fn evaluate(&self, kind: EnvelopeKind, s: ComplexPoint, params: LerchParams, split: AfeSplit) -> Result<EvalResult> {
        let v = afe_value(kind, s, params, split)?;
        Ok(self.finish(kind, s, split, v))
    }
}

pub fn afe_lerch(s: ComplexPoint, params: LerchParams, split: AfeSplit) -> Result<EvalResult> {
    AfeEngine::builtin().afe_lerch(s, params, split)
}

pub fn afe_hurwitz(s: ComplexPoint, alpha: f64, split: AfeSplit) -> Result<EvalResult> {
    AfeEngine::builtin().afe_hurwitz(s, alpha, split)
}

pub fn afe_riemann(s: ComplexPoint, split: AfeSplit) -> Result<EvalResult> {
    AfeEngine::builtin().afe_riemann(s, split)
}

/// One grid point for calibration or scanning. Parameters must be rational
/// so an oracle exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitPoint {
    pub kind: EnvelopeKind,
    pub s: ComplexPoint,
    pub params: LerchParams,
    pub split: AfeSplit,
    pub mode: SplitMode,
}

impl FitPoint {
    /// A point evaluated with the formula [`EnvelopeKind::for_params`] picks.
    pub fn new(s: ComplexPoint, params: LerchParams, mode: SplitMode) -> Result<Self> {
        Self::with_kind(EnvelopeKind::for_params(&params), s, params, mode)
    }

    pub fn with_kind(kind: EnvelopeKind, s: ComplexPoint, params: LerchParams, mode: SplitMode) -> Result<Self> {
        if !kind.accepts(&params) {
            return Err(ZetaError::domain(format!("the {kind} AFE does not apply to {params}")));
        }
        Ok(FitPoint {
            kind,
            s,
            params,
            split: choose_split(s.t(), mode)?,
            mode,
        })
    }
}

/// AFE against oracle at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeCheck {
    pub point: FitPoint,
    pub afe: Complex64,
    pub oracle: Complex64,
    pub abs_error: f64,
    pub envelope: f64,
    pub oracle_error: f64,
    pub oracle_reliable: bool,
}

impl AfeCheck {
    /// `|afe − oracle| / envelope`.
    pub fn ratio(&self) -> f64 {
        self.abs_error / self.envelope
    }
}

pub fn afe_check(point: &FitPoint) -> Result<AfeCheck> {
    let kind = point.kind;
    let afe = afe_value(kind, point.s, point.params, point.split)?.value;
    let oracle = lerch_oracle(point.s, point.params)?;
    let envelope = error_envelope(kind, point.s, point.split).total();
    Ok(AfeCheck {
        point: *point,
        afe,
        oracle: oracle.value,
        abs_error: (afe - oracle.value).norm(),
        envelope,
        oracle_error: oracle.error_estimate,
        oracle_reliable: oracle.reliable,
    })
}

pub fn afe_scan(grid: &[FitPoint], exec: Exec) -> Result<Vec<AfeCheck>> {
    exec.try_map(grid, afe_check)
}

/// `C_fit = max |afe − oracle| / envelope` over the grid. Every point must
/// use the formula of `kind`.
pub fn envelope_fit(kind: EnvelopeKind, grid: &[FitPoint], exec: Exec) -> Result<f64> {
    if grid.is_empty() {
        return Err(ZetaError::config("envelope fit needs a nonempty grid"));
    }
    if let Some(p) = grid.iter().find(|p| p.kind != kind) {
        return Err(ZetaError::config(format!(
            "grid point with {} uses the {} formula, not {kind}",
            p.params, p.kind
        )));
    }
    let checks = afe_scan(grid, exec)?;
    Ok(checks.iter().map(AfeCheck::ratio).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests;

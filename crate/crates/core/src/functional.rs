//! Numerical checks of the exact functional equations.
//!
//! ```text
//! ζ_L(s,α,λ) = Γ(1−s)(2π)^{s−1} { e^{((1−s)/2 − 2αλ)πi}  ζ_L(1−s, λ, 1−α)
//!                               + e^{(−(1−s)/2 + 2α(1−λ))πi} ζ_L(1−s, 1−λ, α) }
//! ζ_H(s,α)   = Γ(1−s)(2π)^{s−1} { e^{(1−s)πi/2} P(1−α, 1−s) + e^{−(1−s)πi/2} P(α, 1−s) }
//! ζ(s)       = χ(s) ζ(1−s)
//! ```
//!
//! `P(β, w) = Σ_{n≥1} e^{2πinβ} n^{−w}` is the periodic zeta function. All
//! parameters are rational so both sides have Euler–Maclaurin oracles.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{chi, gamma_phase_product, ComplexPoint};
use crate::error::{Result, ZetaError};
use crate::oracle::{
    hurwitz_euler_maclaurin, lerch_via_hurwitz, periodic_zeta, riemann_reference,
    EulerMaclaurinConfig,
};
use crate::par::Exec;
use crate::params::Rational;
use crate::report::{format_sig17, CsvRow};
use crate::EvalResult;

/// Absolute tolerance applied where the left side is close to a zero.
pub const NEAR_ZERO_ABSOLUTE: f64 = 1e-9;

pub const DEFAULT_HEIGHTS: [f64; 3] = [10.0, 25.0, 50.0];
pub const DEFAULT_SIGMAS: [f64; 3] = [0.25, 0.5, 0.75];

/// Combines `G·Σ phase_k·value_k` with the propagated error.
fn assemble(terms: [(crate::complex::LogComplex, EvalResult); 2]) -> EvalResult {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut reliable = true;
    let (mut main_terms, mut dual_terms) = (0, 0);
    for (factor, r) in terms {
        let f = factor.to_complex();
        value += f * r.value;
        error_estimate += factor.modulus() * r.error_estimate;
        reliable &= r.reliable;
        main_terms += r.main_terms;
        dual_terms = dual_terms.max(r.dual_terms);
    }
    EvalResult {
        value,
        error_estimate: error_estimate + f64::EPSILON * value.norm(),
        main_terms,
        dual_terms,
        reliable,
    }
}

/// Right side of the Lerch functional equation, `0 < λ < 1`.
pub fn fe_lerch_rhs(
    s: ComplexPoint,
    alpha: Rational,
    lambda: Rational,
    cfg: EulerMaclaurinConfig,
) -> Result<EvalResult> {
    if lambda.is_one() {
        return Err(ZetaError::domain(
            "lambda=1 is covered by the Hurwitz functional equation",
        ));
    }
    let (a, l) = (alpha.value(), lambda.value());
    let w = s.reflect();
    let first = lerch_via_hurwitz(w, l, alpha.complement(), cfg)?;
    let second = lerch_via_hurwitz(w, 1.0 - l, alpha, cfg)?;
    Ok(assemble([
        (gamma_phase_product(s, -0.5, 0.5 - 2.0 * a * l)?, first),
        (gamma_phase_product(s, 0.5, -0.5 + 2.0 * a * (1.0 - l))?, second),
    ]))
}

/// Right side of the Hurwitz functional equation. At `α = 1` this is
/// `χ(s)ζ(1−s)`.
pub fn fe_hurwitz_rhs(s: ComplexPoint, alpha: Rational, cfg: EulerMaclaurinConfig) -> Result<EvalResult> {
    let w = s.reflect();
    let first = periodic_zeta(w, alpha.complement(), cfg)?;
    let second = periodic_zeta(w, alpha, cfg)?;
    Ok(assemble([
        (gamma_phase_product(s, -0.5, 0.5)?, first),
        (gamma_phase_product(s, 0.5, -0.5)?, second),
    ]))
}

/// `χ(s)ζ(1−s)`.
pub fn fe_riemann_rhs(s: ComplexPoint, cfg: EulerMaclaurinConfig) -> Result<EvalResult> {
    let c = chi(s)?;
    let r = riemann_reference(s.reflect(), cfg)?;
    let value = c.to_complex() * r.value;
    Ok(EvalResult {
        value,
        error_estimate: c.modulus() * r.error_estimate + f64::EPSILON * value.norm(),
        ..r
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeKind {
    Lerch,
    Hurwitz,
    Riemann,
}

impl FeKind {
    pub const ALL: [FeKind; 3] = [FeKind::Lerch, FeKind::Hurwitz, FeKind::Riemann];
}

impl fmt::Display for FeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeKind::Lerch => "lerch",
            FeKind::Hurwitz => "hurwitz",
            FeKind::Riemann => "riemann",
        })
    }
}

impl FromStr for FeKind {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lerch" => Ok(FeKind::Lerch),
            "hurwitz" => Ok(FeKind::Hurwitz),
            "riemann" => Ok(FeKind::Riemann),
            _ => Err(ZetaError::Parse(format!("unknown functional equation '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FePoint {
    pub kind: FeKind,
    pub s: ComplexPoint,
    pub alpha: Rational,
    pub lambda: Rational,
}

impl FePoint {
    pub fn lerch(s: ComplexPoint, alpha: Rational, lambda: Rational) -> Self {
        FePoint { kind: FeKind::Lerch, s, alpha, lambda }
    }

    pub fn hurwitz(s: ComplexPoint, alpha: Rational) -> Self {
        FePoint { kind: FeKind::Hurwitz, s, alpha, lambda: Rational::ONE }
    }

    pub fn riemann(s: ComplexPoint) -> Self {
        FePoint { kind: FeKind::Riemann, s, alpha: Rational::ONE, lambda: Rational::ONE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeRecord {
    pub point: FePoint,
    pub lhs: EvalResult,
    pub rhs: EvalResult,
    /// `|L − R| / (|L| + 1e−300)`.
    pub residual: f64,
    pub abs_diff: f64,
}

impl FeRecord {
    pub fn reliable(&self) -> bool {
        self.lhs.reliable && self.rhs.reliable
    }

    /// Relative residual within `rel_tol`, or absolute difference within
    /// [`NEAR_ZERO_ABSOLUTE`] when the left side is near a zero.
    pub fn within(&self, rel_tol: f64) -> bool {
        self.residual <= rel_tol || (self.lhs.value.norm() < 1e-3 && self.abs_diff <= NEAR_ZERO_ABSOLUTE)
    }
}

impl CsvRow for FeRecord {
    fn header() -> &'static [&'static str] {
        &["sigma", "t", "alpha_num", "alpha_den", "lambda_num", "lambda_den", "residual"]
    }

    fn fields(&self) -> Vec<String> {
        let p = &self.point;
        vec![
            format_sig17(p.s.sigma()),
            format_sig17(p.s.t()),
            p.alpha.num().to_string(),
            p.alpha.den().to_string(),
            p.lambda.num().to_string(),
            p.lambda.den().to_string(),
            format_sig17(self.residual),
        ]
    }
}

/// Both sides at one point, with oracles configured for the point's height.
pub fn fe_check(point: &FePoint) -> Result<FeRecord> {
    let s = point.s;
    let cfg = EulerMaclaurinConfig::for_height(s.t());
    let (lhs, rhs) = match point.kind {
        FeKind::Lerch => (
            lerch_via_hurwitz(s, point.alpha.value(), point.lambda, cfg)?,
            fe_lerch_rhs(s, point.alpha, point.lambda, cfg)?,
        ),
        FeKind::Hurwitz => (
            hurwitz_euler_maclaurin(s, point.alpha.value(), cfg)?,
            fe_hurwitz_rhs(s, point.alpha, cfg)?,
        ),
        FeKind::Riemann => (riemann_reference(s, cfg)?, fe_riemann_rhs(s, cfg)?),
    };
    let abs_diff = (lhs.value - rhs.value).norm();
    Ok(FeRecord {
        point: *point,
        lhs,
        rhs,
        residual: abs_diff / (lhs.value.norm() + 1e-300),
        abs_diff,
    })
}

/// Checks every point; records come back sorted by residual, largest first.
pub fn fe_residual_scan(grid: &[FePoint], exec: Exec) -> Result<Vec<FeRecord>> {
    let mut records = exec.try_map(grid, fe_check)?;
    records.sort_by(|a, b| b.residual.total_cmp(&a.residual));
    Ok(records)
}

/// `t ∈ {10, 25, 50}`, `σ ∈ {¼, ½, ¾}` and parameters in `{¼, ½, ¾}`.
pub fn default_fe_grid(kind: FeKind) -> Vec<FePoint> {
    let quarters = [(1, 4), (1, 2), (3, 4)].map(|(p, q)| Rational::new(p, q).expect("valid"));
    let mut grid = Vec::new();
    for &t in &DEFAULT_HEIGHTS {
        for &sigma in &DEFAULT_SIGMAS {
            let s = ComplexPoint::new(sigma, t).expect("finite");
            match kind {
                FeKind::Lerch => {
                    for &a in &quarters {
                        for &l in &quarters {
                            grid.push(FePoint::lerch(s, a, l));
                        }
                    }
                }
                FeKind::Hurwitz => grid.extend(quarters.iter().map(|&a| FePoint::hurwitz(s, a))),
                FeKind::Riemann => grid.push(FePoint::riemann(s)),
            }
        }
    }
    grid
}

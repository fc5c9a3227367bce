//! Complex Gamma machinery kept in the log domain.
//!
//! On the critical strip `|Γ(1−s)|` decays like `e^{−π|t|/2}` while the
//! phase factors `e^{±(1−s)πi/2}` grow at the same rate. Everything here
//! returns a [`LogComplex`] so those exponentials cancel before anything is
//! exponentiated.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// `ln(2π)`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Lanczos shift `g`. Paired with [`LANCZOS_COEFFS`] (9 terms, the GSL set),
/// the relative error of `Γ` is about `2e−15` on `Re z ≥ 1/2`.
pub const LANCZOS_G: f64 = 7.0;

pub const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from a non-positive integer that counts as hitting a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Largest `ln|w|` that still exponentiates to a finite `f64`.
const MAX_LOG_MODULUS: f64 = 709.782_712_893_384;

/// The complex variable `s = σ + it`. Both components are finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    re: f64,
    im: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(ZetaError::domain(format!(
                "complex point must be finite, got {sigma} + {t}i"
            )));
        }
        Ok(ComplexPoint { re: sigma, im: t })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.re
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.im
    }

    #[inline]
    pub fn conj(&self) -> Self {
        ComplexPoint {
            re: self.re,
            im: -self.im,
        }
    }

    /// `1 − s`.
    #[inline]
    pub fn reflect(&self) -> Self {
        ComplexPoint {
            re: 1.0 - self.re,
            im: -self.im,
        }
    }

    #[inline]
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

/// `w = exp(log_modulus + i·argument)`.
///
/// The argument is never wrapped into `(−π, π]`, so phases of products add up
/// linearly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_modulus: f64,
    pub argument: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_modulus: 0.0,
        argument: 0.0,
    };

    pub fn new(log_modulus: f64, argument: f64) -> Self {
        LogComplex {
            log_modulus,
            argument,
        }
    }

    /// Principal logarithm of a nonzero complex number.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re == 0.0 && z.im == 0.0 {
            return Err(ZetaError::domain("logarithm of zero"));
        }
        Ok(Self::from_log(z.ln()))
    }

    /// Wraps a complex logarithm `ln|w| + i arg w`.
    #[inline]
    pub fn from_log(w: Complex64) -> Self {
        LogComplex {
            log_modulus: w.re,
            argument: w.im,
        }
    }

    #[inline]
    pub fn as_log(&self) -> Complex64 {
        Complex64::new(self.log_modulus, self.argument)
    }

    pub fn modulus(&self) -> f64 {
        self.log_modulus.exp()
    }

    pub fn conj(self) -> Self {
        LogComplex {
            log_modulus: self.log_modulus,
            argument: -self.argument,
        }
    }

    pub fn mul(self, other: LogComplex) -> Self {
        LogComplex {
            log_modulus: self.log_modulus + other.log_modulus,
            argument: self.argument + other.argument,
        }
    }

    pub fn div(self, other: LogComplex) -> Self {
        LogComplex {
            log_modulus: self.log_modulus - other.log_modulus,
            argument: self.argument - other.argument,
        }
    }

    pub fn recip(self) -> Self {
        LogComplex {
            log_modulus: -self.log_modulus,
            argument: -self.argument,
        }
    }

    /// Exponentiates, saturating to infinity on overflow and to zero on
    /// underflow.
    pub fn to_complex(&self) -> Complex64 {
        let r = self.log_modulus.exp();
        // sin is evaluated on |arg| so conjugate inputs give bitwise
        // conjugate outputs.
        let (s, c) = self.argument.abs().sin_cos();
        let s = if self.argument < 0.0 { -s } else { s };
        Complex64::new(r * c, r * s)
    }

    pub fn try_to_complex(&self) -> Result<Complex64> {
        if !self.log_modulus.is_finite() || !self.argument.is_finite() {
            return Err(ZetaError::Overflow(format!(
                "non-finite log-domain value {} + {}i",
                self.log_modulus, self.argument
            )));
        }
        if self.log_modulus > MAX_LOG_MODULUS {
            return Err(ZetaError::Overflow(format!(
                "log-modulus {} exceeds the f64 range",
                self.log_modulus
            )));
        }
        Ok(self.to_complex())
    }
}

/// `(sin πx, cos πx)` with exact values at multiples of 1/2.
pub(crate) fn sin_cos_pi(x: f64) -> (f64, f64) {
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 {
        return (0.0, 1.0);
    }
    if r == 0.5 {
        return (1.0, 0.0);
    }
    if r == -0.5 {
        return (-1.0, 0.0);
    }
    if r.abs() == 1.0 {
        return (0.0, -1.0);
    }
    (PI * r).sin_cos()
}

/// `e^{2πiθ}`, reducing `θ` modulo 1 before scaling by 2π.
#[inline]
pub(crate) fn unit_phase(theta: f64) -> Complex64 {
    let (s, c) = sin_cos_pi(2.0 * (theta - theta.floor()));
    Complex64::new(c, s)
}

/// `b^{−s}` for a positive real base.
#[inline]
pub(crate) fn real_pow_neg(base: f64, s: Complex64) -> Complex64 {
    let l = base.ln();
    let m = (-s.re * l).exp();
    let (sn, cs) = (s.im * l).sin_cos();
    Complex64::new(m * cs, -m * sn)
}

/// `ln(1 + u)` accurate for small `|u|`.
fn ln_1p(u: Complex64) -> Complex64 {
    if u.norm() < 0.5 {
        let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
        let im = u.im.atan2(1.0 + u.re);
        Complex64::new(re, im)
    } else {
        (Complex64::new(1.0, 0.0) + u).ln()
    }
}

fn is_gamma_pole(z: Complex64) -> bool {
    z.im.abs() <= POLE_TOLERANCE
        && z.re <= POLE_TOLERANCE
        && (z.re - z.re.round()).abs() <= POLE_TOLERANCE
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += *c / (zm + i as f64);
    }
    let w = zm + (LANCZOS_G + 0.5);
    0.5 * LN_2PI + (zm + 0.5) * w.ln() - w + a.ln()
}

/// Continuous-branch `ln Γ(z)` as a plain complex number.
pub(crate) fn ln_gamma_c(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(ZetaError::Pole {
            function: "gamma",
            at: z,
        });
    }
    if z.im < 0.0 {
        return ln_gamma_c(z.conj()).map(|w| w.conj());
    }
    if z.re >= 0.5 {
        return Ok(lanczos_ln_gamma(z));
    }
    let reflected = ln_gamma_c(Complex64::new(1.0, 0.0) - z)?;
    if z.im == 0.0 {
        let (sp, _) = sin_cos_pi(z.re);
        let arg = if sp < 0.0 { PI } else { 0.0 };
        return Ok(Complex64::new(
            PI.ln() - sp.abs().ln() - reflected.re,
            arg - reflected.im,
        ));
    }
    // Upper half-plane: sin(πz) = (i/2)·e^{−iπz}·(1 − e^{2πiz}) with
    // |e^{2πiz}| = e^{−2π Im z} < 1, which keeps the log on one branch.
    let decay = (-2.0 * PI * z.im).exp();
    let rot = unit_phase(z.re);
    let ln_sin = Complex64::new(0.5f64.ln(), FRAC_PI_2)
        + Complex64::new(PI * z.im, -PI * z.re)
        + ln_1p(-(rot * decay));
    Ok(Complex64::new(PI.ln(), 0.0) - ln_sin - reflected)
}

/// `ln Γ(z)` on the standard continuous branch of the cut plane.
pub fn log_gamma(z: ComplexPoint) -> Result<LogComplex> {
    ln_gamma_c(z.to_complex()).map(LogComplex::from_log)
}

/// `Γ(z)`, failing at poles and when the modulus leaves the `f64` range.
pub fn gamma(z: ComplexPoint) -> Result<Complex64> {
    log_gamma(z)?.try_to_complex()
}

/// `Γ(1−s)·(2π)^{s−1}·e^{(a·s + b)πi}` in the log domain.
pub fn gamma_phase_product(s: ComplexPoint, phase_coeff: f64, phase_const: f64) -> Result<LogComplex> {
    let lg = ln_gamma_c(s.reflect().to_complex())?;
    let (sigma, t) = (s.sigma(), s.t());
    Ok(LogComplex {
        log_modulus: lg.re + (sigma - 1.0) * LN_2PI - phase_coeff * PI * t,
        argument: lg.im + t * LN_2PI + (phase_coeff * sigma + phase_const) * PI,
    })
}

/// `χ(s) = 2Γ(1−s) sin(πs/2) (2π)^{s−1}`, so that `ζ(s) = χ(s) ζ(1−s)`.
///
/// For `Re s ≤ 1/2` the sine is written as `(i/2)e^{−iπs/2}(1 − e^{iπs})`
/// and absorbed into [`gamma_phase_product`]. For `Re s > 1/2` the
/// reflection formula turns `Γ(1−s) sin(πs/2)` into `π / (2Γ(s) cos(πs/2))`,
/// which removes the `0·∞` at `s = 2, 4, 6, …`. χ has poles at odd positive
/// integers and zeros at non-positive even integers; both are errors.
pub fn chi(s: ComplexPoint) -> Result<LogComplex> {
    if s.t() < 0.0 {
        return chi(s.conj()).map(LogComplex::conj);
    }
    let z = s.to_complex();
    let (sn, cs) = sin_cos_pi(s.sigma());
    // e^{iπs}, modulus e^{−πt} ≤ 1
    let e = Complex64::new(cs, sn) * (-PI * s.t()).exp();
    if s.sigma() <= 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - e;
        if one_minus.re == 0.0 && one_minus.im == 0.0 {
            return Err(ZetaError::domain(format!(
                "chi vanishes at s = {}; no finite logarithm",
                s.sigma()
            )));
        }
        let base = gamma_phase_product(s, -0.5, 0.0)?;
        Ok(LogComplex::from_log(
            base.as_log() + Complex64::new(0.0, FRAC_PI_2) + ln_1p(-e),
        ))
    } else {
        let one_plus = Complex64::new(1.0, 0.0) + e;
        if one_plus.re == 0.0 && one_plus.im == 0.0 {
            return Err(ZetaError::Pole {
                function: "chi",
                at: z,
            });
        }
        let lg = ln_gamma_c(z)?;
        let ln_two_cos = Complex64::new(0.0, -0.5 * PI) * z + ln_1p(e);
        Ok(LogComplex::from_log(z * LN_2PI - lg - ln_two_cos))
    }
}

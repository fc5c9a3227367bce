//! Reference evaluators for ζ_H and ζ_L.
//!
//! These are slower than the approximate functional equations but come with
//! computable error estimates, so they serve as ground truth:
//!
//! * [`lerch_direct`] sums the defining series (absolutely convergent for
//!   `σ > 1`).
//! * [`hurwitz_euler_maclaurin`] continues ζ_H to the whole plane by
//!   Euler–Maclaurin summation.
//! * [`lerch_via_hurwitz`] regroups the Lerch series for `λ = p/q` into `q`
//!   Hurwitz values.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::complex::{real_pow_neg, unit_phase, ComplexPoint};
use crate::error::{Result, ZetaError};
use crate::params::{LerchParams, Rational, MAX_DENOMINATOR};
use crate::EvalResult;

/// Relative size of the truncation estimate above which a result is flagged
/// unreliable.
pub const RELIABLE_RELATIVE: f64 = 1e-10;

/// Upper bound on the number of Bernoulli corrections; past this the
/// asymptotic series starts to diverge for the cutoffs used here.
pub const MAX_BERNOULLI_TERMS: usize = 30;

/// `B_2, B_4, …, B_60` rounded to nearest `f64`.
pub const BERNOULLI_EVEN: [f64; MAX_BERNOULLI_TERMS] = [
    0.166_666_666_666_666_66,
    -0.033_333_333_333_333_33,
    0.023_809_523_809_523_808,
    -0.033_333_333_333_333_33,
    0.075_757_575_757_575_76,
    -0.253_113_553_113_553_1,
    1.166_666_666_666_666_7,
    -7.092_156_862_745_098,
    54.971_177_944_862_156,
    -529.124_242_424_242_4,
    6_192.123_188_405_797,
    -86_580.253_113_553_12,
    1_425_517.166_666_666_7,
    -27_298_231.067_816_094,
    601_580_873.900_642_4,
    -15_116_315_767.092_157,
    429_614_643_061.166_7,
    -13_711_655_205_088.332,
    488_332_318_973_593.2,
    -1.929_657_934_194_006_8e16,
    8.416_930_475_736_826e17,
    -4.033_807_185_405_945_4e19,
    2.115_074_863_808_199_3e21,
    -1.208_662_652_229_652_6e23,
    7.500_866_746_076_964e24,
    -5.038_778_101_481_069e26,
    3.652_877_648_481_812_2e28,
    -2.849_876_930_245_088e30,
    2.386_542_749_968_362_7e32,
    -2.139_994_925_722_533_5e34,
];

/// `B_{2k} / (2k)!` for `k = 1..=30`.
fn bernoulli_coefficients() -> &'static [f64; MAX_BERNOULLI_TERMS] {
    static COEFFS: OnceLock<[f64; MAX_BERNOULLI_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; MAX_BERNOULLI_TERMS];
        let mut fact = 1.0f64;
        for k in 1..=MAX_BERNOULLI_TERMS {
            fact *= ((2 * k - 1) * (2 * k)) as f64;
            out[k - 1] = BERNOULLI_EVEN[k - 1] / fact;
        }
        out
    })
}

/// Direct-sum length `N₀` and number of Bernoulli corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurinConfig {
    pub cutoff: usize,
    pub bernoulli_terms: usize,
}

impl EulerMaclaurinConfig {
    pub const DEFAULT_BERNOULLI_TERMS: usize = 15;

    pub fn new(cutoff: usize, bernoulli_terms: usize) -> Self {
        EulerMaclaurinConfig {
            cutoff,
            bernoulli_terms,
        }
    }

    /// `cutoff = max(2⌈|t|⌉, 50)`, 15 corrections.
    pub fn for_height(t: f64) -> Self {
        let cutoff = (2.0 * t.abs().ceil()).max(50.0) as usize;
        EulerMaclaurinConfig::new(cutoff, Self::DEFAULT_BERNOULLI_TERMS)
    }

    pub fn min_cutoff(t: f64) -> usize {
        t.abs().ceil() as usize + 10
    }

    pub fn validate(&self, t: f64) -> Result<()> {
        if self.bernoulli_terms == 0 || self.bernoulli_terms > MAX_BERNOULLI_TERMS {
            return Err(ZetaError::config(format!(
                "bernoulli_terms must be in 1..={MAX_BERNOULLI_TERMS}, got {}",
                self.bernoulli_terms
            )));
        }
        let min = Self::min_cutoff(t);
        if self.cutoff < min {
            return Err(ZetaError::config(format!(
                "cutoff {} below ceil(|t|) + 10 = {min} at t = {t}",
                self.cutoff
            )));
        }
        Ok(())
    }
}

/// Euler–Maclaurin value with its truncation and rounding parts kept apart.
#[derive(Debug, Clone, Copy)]
struct EmValue {
    value: Complex64,
    truncation: f64,
    rounding: f64,
}

fn check_not_one(s: ComplexPoint) -> Result<()> {
    if (s.sigma() - 1.0).abs() <= 1e-14 && s.t().abs() <= 1e-14 {
        return Err(ZetaError::Pole {
            function: "zeta",
            at: s.to_complex(),
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ZetaError::domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

fn euler_maclaurin(s: ComplexPoint, alpha: f64, cfg: &EulerMaclaurinConfig) -> EmValue {
    let z = s.to_complex();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for n in 0..cfg.cutoff {
        let term = real_pow_neg(n as f64 + alpha, z);
        abs_sum += term.norm();
        sum += term;
    }
    let a = cfg.cutoff as f64 + alpha;
    let a_pow = real_pow_neg(a, z);
    sum += a * a_pow / (z - 1.0) + 0.5 * a_pow;

    // u_k = (s)_{2k−1} a^{−s−2k+1}
    let coeffs = bernoulli_coefficients();
    let inv_a2 = 1.0 / (a * a);
    let mut u = z * a_pow / a;
    let mut last = 0.0;
    for k in 1..=cfg.bernoulli_terms {
        if k > 1 {
            let m = (2 * k - 3) as f64;
            u *= (z + m) * (z + m + 1.0) * inv_a2;
        }
        let term = coeffs[k - 1] * u;
        sum += term;
        last = term.norm();
    }
    // Each power carries a phase error of about ε·|t|·ln(n+α).
    let rounding = f64::EPSILON * abs_sum * (4.0 + s.t().abs() * a.ln());
    EmValue {
        value: sum,
        truncation: last,
        rounding,
    }
}

/// Partial sum of `Σ e^{2πinλ}(n+α)^{−s}` over `n < terms` with a tail bound.
///
/// For `σ > 1` the tail is bounded by `(terms−1+α)^{1−σ}/(σ−1)`. For
/// `0 < σ ≤ 1` and `0 < λ < 1` the series still converges; the Abel-summation
/// bound `(terms+α)^{−σ}(1+|s|/σ)/|sin πλ|` is reported but the result is
/// flagged unreliable.
pub fn lerch_direct(s: ComplexPoint, params: LerchParams, terms: usize) -> Result<EvalResult> {
    if terms == 0 {
        return Err(ZetaError::config("lerch_direct needs at least one term"));
    }
    let (sigma, alpha, lambda) = (s.sigma(), params.alpha(), params.lambda());
    if sigma <= 1.0 && params.is_hurwitz() {
        return Err(ZetaError::domain(format!(
            "the series diverges for sigma = {sigma} <= 1 when lambda = 1"
        )));
    }
    if sigma <= 0.0 {
        return Err(ZetaError::domain(format!(
            "the series diverges for sigma = {sigma} <= 0"
        )));
    }
    let z = s.to_complex();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for n in 0..terms {
        let term = unit_phase(n as f64 * lambda) * real_pow_neg(n as f64 + alpha, z);
        abs_sum += term.norm();
        sum += term;
    }
    let rounding =
        f64::EPSILON * abs_sum * (4.0 + s.t().abs() * (terms as f64 + alpha).ln());
    let (tail, reliable) = if sigma > 1.0 {
        let base = terms as f64 - 1.0 + alpha;
        (base.powf(1.0 - sigma) / (sigma - 1.0), true)
    } else {
        let tail = (terms as f64 + alpha).powf(-sigma) * (1.0 + z.norm() / sigma)
            / (PI * lambda).sin().abs();
        (tail, false)
    };
    Ok(EvalResult {
        value: sum,
        error_estimate: tail + rounding,
        main_terms: terms,
        dual_terms: 0,
        reliable,
    })
}

/// ζ_H(s, α) by Euler–Maclaurin summation:
///
/// `Σ_{n<N}(n+α)^{−s} + (N+α)^{1−s}/(s−1) + ½(N+α)^{−s}
///  + Σ_{k≤K} B_{2k}/(2k)! · (s)_{2k−1} (N+α)^{−s−2k+1}`.
///
/// The error estimate is the last correction term plus a rounding floor; the
/// result is unreliable when the last correction exceeds `1e−10·|value|`.
pub fn hurwitz_euler_maclaurin(
    s: ComplexPoint,
    alpha: f64,
    cfg: EulerMaclaurinConfig,
) -> Result<EvalResult> {
    check_not_one(s)?;
    check_alpha(alpha)?;
    cfg.validate(s.t())?;
    let em = euler_maclaurin(s, alpha, &cfg);
    Ok(EvalResult {
        value: em.value,
        error_estimate: em.truncation + em.rounding,
        main_terms: cfg.cutoff,
        dual_terms: cfg.bernoulli_terms,
        reliable: em.truncation <= RELIABLE_RELATIVE * em.value.norm(),
    })
}

/// ζ_L(s, α, p/q) = q^{−s} Σ_{r<q} e^{2πirp/q} ζ_H(s, (r+α)/q).
pub fn lerch_via_hurwitz(
    s: ComplexPoint,
    alpha: f64,
    lam: Rational,
    cfg: EulerMaclaurinConfig,
) -> Result<EvalResult> {
    if lam.den() > MAX_DENOMINATOR {
        return Err(ZetaError::domain(format!(
            "lambda denominator {} exceeds {MAX_DENOMINATOR}",
            lam.den()
        )));
    }
    if lam.is_one() {
        return hurwitz_euler_maclaurin(s, alpha, cfg);
    }
    check_not_one(s)?;
    check_alpha(alpha)?;
    cfg.validate(s.t())?;
    let q = lam.den() as f64;
    let z = s.to_complex();
    let mut sum = Complex64::new(0.0, 0.0);
    let (mut truncation, mut rounding) = (0.0, 0.0);
    for r in 0..lam.den() {
        let em = euler_maclaurin(s, (r as f64 + alpha) / q, &cfg);
        let phase = unit_phase((r * lam.num()) as f64 / q);
        sum += phase * em.value;
        truncation += em.truncation;
        rounding += em.rounding;
    }
    let scale = q.powf(-s.sigma());
    let value = real_pow_neg(q, z) * sum;
    let truncation = scale * truncation;
    Ok(EvalResult {
        value,
        error_estimate: truncation + scale * rounding + f64::EPSILON * value.norm(),
        main_terms: cfg.cutoff * lam.den() as usize,
        dual_terms: cfg.bernoulli_terms,
        reliable: truncation <= RELIABLE_RELATIVE * value.norm(),
    })
}

/// ζ(s) = ζ_H(s, 1).
pub fn riemann_reference(s: ComplexPoint, cfg: EulerMaclaurinConfig) -> Result<EvalResult> {
    hurwitz_euler_maclaurin(s, 1.0, cfg)
}

/// ζ_L(s, α, λ) for rational parameters with the default configuration at
/// this height.
pub fn lerch_oracle(s: ComplexPoint, params: LerchParams) -> Result<EvalResult> {
    let (_, lam) = params.require_exact()?;
    lerch_via_hurwitz(s, params.alpha(), lam, EulerMaclaurinConfig::for_height(s.t()))
}

/// The periodic zeta function `Σ_{n≥1} e^{2πinβ} n^{−s} = e^{2πiβ} ζ_L(s, 1, β)`.
pub fn periodic_zeta(s: ComplexPoint, beta: Rational, cfg: EulerMaclaurinConfig) -> Result<EvalResult> {
    let r = lerch_via_hurwitz(s, 1.0, beta, cfg)?;
    let value = unit_phase(beta.value()) * r.value;
    Ok(EvalResult { value, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(sigma: f64, t: f64) -> ComplexPoint {
        ComplexPoint::new(sigma, t).unwrap()
    }

    fn r(n: u32, d: u32) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn direct_single_term_is_alpha_power() {
        let s = p(1.5, 3.0);
        let params = LerchParams::new(0.3, 0.7).unwrap();
        let res = lerch_direct(s, params, 1).unwrap();
        assert_eq!(res.value, real_pow_neg(0.3, s.to_complex()));
        assert!(res.reliable);
    }

    #[test]
    fn direct_zeta_two() {
        let res = lerch_direct(p(2.0, 0.0), LerchParams::new(1.0, 1.0).unwrap(), 100_000).unwrap();
        let exact = PI * PI / 6.0;
        assert!((res.value.re - exact).abs() <= res.error_estimate);
        assert!(res.error_estimate < 2e-5);
        let res = lerch_direct(p(2.0, 0.0), LerchParams::new(0.5, 1.0).unwrap(), 100_000).unwrap();
        assert!((res.value.re - PI * PI / 2.0).abs() <= res.error_estimate);
    }

    #[test]
    fn direct_domain_errors() {
        let hurwitz = LerchParams::new(1.0, 1.0).unwrap();
        assert!(matches!(lerch_direct(p(1.0, 5.0), hurwitz, 10), Err(ZetaError::Domain(_))));
        let lerch = LerchParams::new(1.0, 0.5).unwrap();
        let res = lerch_direct(p(0.5, 5.0), lerch, 1000).unwrap();
        assert!(!res.reliable);
        assert!(lerch_direct(p(0.0, 5.0), lerch, 1000).is_err());
    }

    #[test]
    fn euler_maclaurin_zeta_two_and_zero() {
        let cfg = EulerMaclaurinConfig::for_height(0.0);
        let z2 = riemann_reference(p(2.0, 0.0), cfg).unwrap();
        assert!((z2.value - Complex64::new(PI * PI / 6.0, 0.0)).norm() < 1e-12);
        assert!(z2.reliable);
        let z0 = riemann_reference(p(0.0, 0.0), cfg).unwrap();
        assert!((z0.value - Complex64::new(-0.5, 0.0)).norm() < 1e-13, "{}", z0.value);
        assert!(matches!(
            riemann_reference(p(1.0, 0.0), cfg),
            Err(ZetaError::Pole { .. })
        ));
    }

    #[test]
    fn first_zero_landmark() {
        let s = p(0.5, 14.134_725);
        let z = riemann_reference(s, EulerMaclaurinConfig::for_height(s.t())).unwrap();
        assert!(z.value.norm() <= 5e-4);
        // 40-digit value: 1.7674e-8 - 1.1102e-7 i
        assert!((z.value - Complex64::new(1.767_429_841_384_903_9e-8, -1.110_202_893_092_311_7e-7)).norm() < 1e-13);
    }

    #[test]
    fn config_preconditions() {
        let s = p(0.5, 100.0);
        let bad = EulerMaclaurinConfig::new(100, 15);
        assert!(matches!(hurwitz_euler_maclaurin(s, 0.5, bad), Err(ZetaError::Config(_))));
        let bad = EulerMaclaurinConfig::new(500, 31);
        assert!(matches!(hurwitz_euler_maclaurin(s, 0.5, bad), Err(ZetaError::Config(_))));
        assert!(hurwitz_euler_maclaurin(s, 0.0, EulerMaclaurinConfig::for_height(100.0)).is_err());
        assert_eq!(EulerMaclaurinConfig::for_height(3.2).cutoff, 50);
        assert_eq!(EulerMaclaurinConfig::for_height(-100.5).cutoff, 202);
    }

    // 40-digit mpmath values of ζ_H / ζ_L through the same regrouping.
    #[test]
    fn matches_arbitrary_precision_values() {
        let cases: [(f64, f64, (u32, u32), (u32, u32), (f64, f64)); 6] = [
            (0.5, 100.0, (1, 3), (1, 3), (-1.423_038_836_687_106, 0.530_178_698_800_318_4)),
            (0.5, 100.0, (1, 1), (1, 2), (-1.033_937_922_410_038_5, 0.763_196_627_742_642_7)),
            (0.5, 200.0, (1, 4), (1, 1), (1.904_118_987_816_081_8, 1.443_755_045_837_954_9)),
            (0.0, 50.0, (1, 2), (1, 1), (2.947_057_663_642_997_7, -0.092_721_257_817_733_63)),
            (0.25, 40.0, (3, 4), (1, 1), (0.236_339_587_959_695_2, -1.668_581_816_434_446_8)),
            (0.5, 30.0, (1, 2), (1, 3), (0.965_535_023_394_525_1, 3.058_108_584_118_665)),
        ];
        for (sigma, t, (an, ad), (ln, ld), (re, im)) in cases {
            let s = p(sigma, t);
            let res = lerch_via_hurwitz(
                s,
                r(an, ad).value(),
                r(ln, ld),
                EulerMaclaurinConfig::for_height(t),
            )
            .unwrap();
            let want = Complex64::new(re, im);
            assert!((res.value - want).norm() < 1e-11, "{s:?} {}", res.value);
            assert!((res.value - want).norm() <= res.error_estimate.max(1e-13) * 10.0);
            assert!(res.reliable);
        }
    }

    #[test]
    fn q1_decomposition_is_hurwitz_exactly() {
        let s = p(0.3, 77.0);
        let cfg = EulerMaclaurinConfig::for_height(77.0);
        let a = lerch_via_hurwitz(s, 0.4, Rational::ONE, cfg).unwrap();
        let b = hurwitz_euler_maclaurin(s, 0.4, cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn half_lambda_regrouping() {
        // ζ_L(s, α, 1/2) = 2^{−s}[ζ_H(s, α/2) − ζ_H(s, (1+α)/2)]
        let s = p(0.7, 20.0);
        let cfg = EulerMaclaurinConfig::for_height(20.0);
        let alpha = 0.3;
        let l = lerch_via_hurwitz(s, alpha, r(1, 2), cfg).unwrap().value;
        let h1 = hurwitz_euler_maclaurin(s, alpha / 2.0, cfg).unwrap().value;
        let h2 = hurwitz_euler_maclaurin(s, (1.0 + alpha) / 2.0, cfg).unwrap().value;
        let expect = real_pow_neg(2.0, s.to_complex()) * (h1 - h2);
        assert!((l - expect).norm() < 1e-14);
    }

    #[test]
    fn large_denominator_rejected() {
        let s = p(0.5, 10.0);
        let cfg = EulerMaclaurinConfig::for_height(10.0);
        assert!(lerch_via_hurwitz(s, 0.5, r(1, 65), cfg).is_err());
        assert!(lerch_via_hurwitz(s, 0.5, r(1, 64), cfg).is_ok());
    }

    #[test]
    fn periodic_zeta_at_one_is_riemann() {
        let s = p(0.25, 12.0);
        let cfg = EulerMaclaurinConfig::for_height(12.0);
        let a = periodic_zeta(s, Rational::ONE, cfg).unwrap().value;
        let b = riemann_reference(s, cfg).unwrap().value;
        assert!((a - b).norm() < 1e-15);
        // Σ (−1)^n n^{−s} = (2^{1−s} − 1) ζ(s)
        let a = periodic_zeta(s, r(1, 2), cfg).unwrap().value;
        let expect = (real_pow_neg(2.0, s.to_complex() - 1.0) - 1.0) * b;
        assert!((a - expect).norm() < 1e-13);
    }
}

use std::f64::consts::PI;

use lerch_afe::afe::{afe_value, calibration_grid, envelope_fit};
use lerch_afe::mean_square::fit_residual_exponent;
use lerch_afe::oracle::{BERNOULLI_EVEN, MAX_BERNOULLI_TERMS};
use lerch_afe::report::format_sig17;
use lerch_afe::*;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (1u32..=12).prop_flat_map(|q| (1..=q).prop_map(move |p| Rational::new(p, q).unwrap()))
}

fn strip_point() -> impl Strategy<Value = ComplexPoint> {
    (0.0..=1.0f64, 2.0 * PI..800.0f64, any::<bool>())
        .prop_map(|(sigma, h, up)| ComplexPoint::new(sigma, if up { h } else { -h }).unwrap())
}

/// A split along `2πxy = |t|` with `y` anywhere in `[1, |t|/2π]`.
fn split_for(t: f64, u: f64) -> AfeSplit {
    let y = (t.abs() / (2.0 * PI)).powf(u).max(1.0);
    AfeSplit::with_y(t, y).unwrap()
}

#[test]
fn bernoulli_table_matches_exact_recurrence() {
    let n = 2 * MAX_BERNOULLI_TERMS;
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    for k in 1..=MAX_BERNOULLI_TERMS {
        let exact = b[2 * k].to_f64().unwrap();
        let table = BERNOULLI_EVEN[k - 1];
        assert!((exact - table).abs() <= 2.0 * f64::EPSILON * exact.abs(), "B_{}: {exact} vs {table}", 2 * k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_complex_round_trips(lm in -50.0..50.0f64, arg in -3.0..3.0f64, lm2 in -50.0..50.0f64, arg2 in -3.0..3.0f64) {
        let a = LogComplex::new(lm, arg);
        let b = LogComplex::new(lm2, arg2);
        let back = a.mul(b).div(b);
        prop_assert!((back.log_modulus - lm).abs() < 1e-12);
        prop_assert!((back.argument - arg).abs() < 1e-12);
        let z = a.to_complex();
        let w = LogComplex::from_complex(z).unwrap().to_complex();
        prop_assert!((z - w).norm() <= 1e-14 * z.norm());
    }

    #[test]
    fn log_gamma_conjugate_symmetry(x in -20.0..20.0f64, y in 0.1..500.0f64) {
        let up = log_gamma(ComplexPoint::new(x, y).unwrap()).unwrap();
        let down = log_gamma(ComplexPoint::new(x, -y).unwrap()).unwrap();
        prop_assert_eq!(up.log_modulus, down.log_modulus);
        prop_assert_eq!(up.argument, -down.argument);
    }

    #[test]
    fn gamma_reflection(x in -3.0..3.0f64, y in 0.2..30.0f64) {
        // Γ(z)Γ(1−z) = π / sin(πz).
        let z = ComplexPoint::new(x, y).unwrap();
        let lhs = log_gamma(z).unwrap().mul(log_gamma(z.reflect()).unwrap()).to_complex();
        let zc = z.to_complex();
        let rhs = Complex64::new(PI, 0.0) / (zc * PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
    }

    #[test]
    fn chi_is_an_involution(s in strip_point()) {
        let prod = chi(s).unwrap().mul(chi(s.reflect()).unwrap()).to_complex();
        prop_assert!((prod - Complex64::new(1.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn gamma_phase_product_matches_direct(sigma in 0.0..1.0f64, t in -30.0..30.0f64, a in -0.5..0.5f64, b in -2.0..2.0f64) {
        let s = ComplexPoint::new(sigma, t).unwrap();
        let z = s.to_complex();
        let direct = gamma(s.reflect()).unwrap()
            * (z - 1.0).expf(2.0 * PI)
            * (Complex64::new(0.0, PI) * (a * z + b)).exp();
        let got = gamma_phase_product(s, a, b).unwrap().to_complex();
        prop_assert!((got - direct).norm() <= 1e-11 * direct.norm());
    }

    #[test]
    fn rationals_are_reduced(p in 1u32..=64, q in 1u32..=64) {
        prop_assume!(p <= q);
        let r = Rational::new(p, q).unwrap();
        prop_assert!((r.value() - p as f64 / q as f64).abs() < 1e-15);
        let g = (1..=r.den()).filter(|d| r.num().is_multiple_of(*d) && r.den().is_multiple_of(*d)).max().unwrap();
        prop_assert_eq!(g, 1);
        if !r.is_one() {
            prop_assert_eq!(r.complement().complement(), r);
        }
    }

    #[test]
    fn oracle_conjugation(sigma in -0.5..2.0f64, t in 0.0..300.0f64, a in rational(), l in rational()) {
        let s = ComplexPoint::new(sigma, t).unwrap();
        prop_assume!((s.to_complex() - 1.0).norm() > 0.1);
        let cfg = EulerMaclaurinConfig::for_height(t);
        let up = lerch_via_hurwitz(s, a.value(), l, cfg).unwrap();
        let down = lerch_via_hurwitz(s.conj(), a.value(), l.complement(), cfg).unwrap();
        prop_assert!((up.value.conj() - down.value).norm() <= 1e-10 * up.value.norm().max(1.0));
    }

    #[test]
    fn oracle_step_halving(sigma in -0.5..1.5f64, t in 0.0..600.0f64, alpha in 0.02..=1.0f64) {
        let s = ComplexPoint::new(sigma, t).unwrap();
        prop_assume!((s.to_complex() - 1.0).norm() > 0.1);
        let cfg = EulerMaclaurinConfig::for_height(t);
        let a = hurwitz_euler_maclaurin(s, alpha, cfg).unwrap();
        let b = hurwitz_euler_maclaurin(s, alpha, EulerMaclaurinConfig::new(2 * cfg.cutoff, cfg.bernoulli_terms)).unwrap();
        prop_assert!((a.value - b.value).norm() <= a.error_estimate + b.error_estimate);
    }

    #[test]
    fn split_invariant(t in 2.0 * PI..1e5f64, u in 0.0..=1.0f64) {
        for mode in [SplitMode::Balanced, SplitMode::MeanSquare] {
            if let Ok(split) = choose_split(t, mode) {
                prop_assert!(split.x() >= 1.0 && split.y() >= 1.0);
                prop_assert!(split.check(t).is_ok());
            }
        }
        let split = split_for(t, u);
        prop_assert!((2.0 * PI * split.x() * split.y() - t).abs() <= 1e-12 * t);
    }

    #[test]
    fn afe_conjugation_is_exact(s in strip_point(), a in rational(), l in rational(), u in 0.0..=1.0f64) {
        let split = split_for(s.t(), u);
        let up = LerchParams::rational(a, l);
        let down = LerchParams::rational(a, l.complement());
        let kind = EnvelopeKind::for_params(&up);
        let x = afe_value(kind, s, up, split).unwrap().value;
        let y = afe_value(kind, s.conj(), down, split).unwrap().value;
        prop_assert_eq!(x.conj(), y);
    }

    #[test]
    fn afe_term_counts_bounded(s in strip_point(), a in rational(), l in rational(), u in 0.0..=1.0f64) {
        let split = split_for(s.t(), u);
        let p = LerchParams::rational(a, l);
        let r = afe_value(EnvelopeKind::for_params(&p), s, p, split).unwrap();
        prop_assert!((r.main_terms + r.dual_terms) as f64 <= split.x() + split.y() + 4.0);
    }

    #[test]
    fn alpha_one_reduction(s in strip_point(), u in 0.0..=1.0f64) {
        let split = split_for(s.t(), u);
        let h = afe_hurwitz(s, 1.0, split).unwrap().value;
        let r = afe_riemann(s, split).unwrap().value;
        prop_assert!((h - r).norm() <= 1e-12 * r.norm().max(1.0));
    }

    #[test]
    fn envelope_is_positive(s in strip_point(), u in 0.0..=1.0f64) {
        let split = split_for(s.t(), u);
        for kind in EnvelopeKind::ALL {
            let e = error_envelope(kind, s, split);
            prop_assert!(e.term1 > 0.0 && e.term2 > 0.0 && e.total().is_finite());
        }
    }

    #[test]
    fn synthetic_exponent_recovered(e in 0.0..1.5f64, c in 0.1..10.0f64, t0 in 100.0..500.0f64) {
        let ts: Vec<f64> = (0..5).map(|k| t0 * 2f64.powi(k)).collect();
        let rs: Vec<f64> = ts.iter().map(|&t| c * t * t.ln().powf(e)).collect();
        let fit = fit_residual_exponent(&ts, &rs).unwrap();
        prop_assert!((fit.exponent - e).abs() < 1e-8);
        prop_assert!((fit.constant - c).abs() < 1e-8 * c);
    }

    #[test]
    fn sig17_round_trips(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        prop_assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn calibration_is_nonnegative_and_thread_stable() {
    for kind in EnvelopeKind::ALL {
        let grid = calibration_grid(kind);
        let par = envelope_fit(kind, &grid, Exec::Parallel).unwrap();
        let seq = envelope_fit(kind, &grid, Exec::Sequential).unwrap();
        assert!(par >= 0.0);
        assert_eq!(par, seq);
    }
}

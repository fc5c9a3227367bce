use super::*;
use crate::params::Rational;

fn pt(sigma: f64, t: f64) -> ComplexPoint {
    ComplexPoint::new(sigma, t).unwrap()
}

fn rat(p: u32, q: u32) -> Rational {
    Rational::new(p, q).unwrap()
}

#[test]
fn balanced_split_examples() {
    let sp = choose_split(8.0 * PI, SplitMode::Balanced).unwrap();
    assert_eq!((sp.x(), sp.y()), (2.0, 2.0));
    let sp = choose_split(-2.0 * PI, SplitMode::Balanced).unwrap();
    assert_eq!((sp.x(), sp.y()), (1.0, 1.0));
}

#[test]
fn mean_square_split_example() {
    let t = 4f64.exp();
    let sp = choose_split(t, SplitMode::MeanSquare).unwrap();
    assert!((sp.y() - 2.0).abs() < 1e-14);
    assert!((sp.x() - t / (4.0 * PI)).abs() < 1e-12);
}

#[test]
fn split_below_two_pi_is_domain_error() {
    for mode in [SplitMode::Balanced, SplitMode::MeanSquare, SplitMode::Scaled(0.5)] {
        assert!(matches!(choose_split(6.0, mode), Err(ZetaError::Domain(_))));
    }
    assert!(choose_split(f64::NAN, SplitMode::Balanced).is_err());
    // y = ½√(t/2π) < 1 just above 2π.
    assert!(choose_split(7.0, SplitMode::Scaled(0.5)).is_err());
}

#[test]
fn split_modes_parse() {
    assert_eq!("balanced".parse::<SplitMode>().unwrap(), SplitMode::Balanced);
    assert_eq!("meansquare".parse::<SplitMode>().unwrap(), SplitMode::MeanSquare);
    assert_eq!("skew-high".parse::<SplitMode>().unwrap(), SplitMode::Scaled(2.0));
    assert_eq!("scaled:1.5".parse::<SplitMode>().unwrap(), SplitMode::Scaled(1.5));
    assert!("scaled:-1".parse::<SplitMode>().is_err());
    assert!("diagonal".parse::<SplitMode>().is_err());
}

#[test]
fn envelope_examples() {
    let sp = AfeSplit::new(4.0, 4.0).unwrap();
    let e = error_envelope(EnvelopeKind::Lerch, pt(0.5, 100.0), sp);
    assert!((e.term1 - 0.5).abs() < 1e-15);
    assert!((e.term2 - 0.5).abs() < 1e-15);
    let e = error_envelope(EnvelopeKind::Hurwitz, pt(0.5, 100.0), sp);
    assert!((e.term2 - 5.0).abs() < 1e-14);
    let e = error_envelope(EnvelopeKind::Riemann, pt(0.0, 16.0), sp);
    assert!((e.term1 - 1.0).abs() < 1e-15);
    assert!((e.term2 - 1.0).abs() < 1e-15);
}

#[test]
fn rejects_bad_inputs() {
    let s = pt(0.5, 100.0);
    let sp = choose_split(100.0, SplitMode::Balanced).unwrap();
    let hurwitz = LerchParams::rational(rat(1, 2), Rational::ONE);
    assert!(matches!(afe_lerch(s, hurwitz, sp), Err(ZetaError::Domain(m)) if m.contains("hurwitz")));
    let p = LerchParams::rational(rat(1, 2), rat(1, 3));
    assert!(afe_lerch(pt(1.5, 100.0), p, sp).is_err());
    assert!(afe_lerch(pt(-0.1, 100.0), p, sp).is_err());
    let off = AfeSplit::new(sp.x() * (1.0 + 1e-9), sp.y()).unwrap();
    assert!(matches!(afe_lerch(s, p, off), Err(ZetaError::Domain(m)) if m.contains("2*pi*x*y")));
    assert!(AfeSplit::new(0.5, 10.0).is_err());
    assert!(afe_hurwitz(s, 0.0, sp).is_err());
}

#[test]
fn riemann_is_hurwitz_at_alpha_one() {
    for &(sigma, t) in &[(0.0, 30.0), (0.5, 100.0), (0.9, -250.0)] {
        let s = pt(sigma, t);
        let sp = choose_split(t, SplitMode::Balanced).unwrap();
        let r = afe_riemann(s, sp).unwrap();
        let h = afe_hurwitz(s, 1.0, sp).unwrap();
        assert!((r.value - h.value).norm() <= 1e-12 * r.value.norm().max(1.0));
        assert_eq!((r.main_terms, r.dual_terms), (h.main_terms, h.dual_terms));
    }
}

#[test]
fn term_counts() {
    let sp = AfeSplit::with_y(100.0, 2.5).unwrap();
    let s = pt(0.5, 100.0);
    let l = afe_lerch(s, LerchParams::rational(rat(1, 3), rat(1, 2)), sp).unwrap();
    assert_eq!((l.main_terms, l.dual_terms), (sp.x().floor() as usize + 1, 3));
    let h = afe_hurwitz(s, 0.25, sp).unwrap();
    assert_eq!((h.main_terms, h.dual_terms), (sp.x().floor() as usize + 1, 2));
}

#[test]
fn negative_height_is_conjugate() {
    let p = LerchParams::rational(rat(1, 3), rat(1, 4));
    let q = LerchParams::rational(rat(1, 3), rat(3, 4));
    let sp = choose_split(120.0, SplitMode::Balanced).unwrap();
    let up = afe_lerch(pt(0.3, 120.0), p, sp).unwrap();
    let down = afe_lerch(pt(0.3, -120.0), q, sp).unwrap();
    assert_eq!(up.value.conj(), down.value);
    let up = afe_hurwitz(pt(0.3, 120.0), 0.25, sp).unwrap();
    let down = afe_hurwitz(pt(0.3, -120.0), 0.25, sp).unwrap();
    assert_eq!(up.value.conj(), down.value);
}

// Values from an independent arbitrary-precision evaluation.
#[test]
fn matches_reference_values_within_envelope() {
    let cases = [
        (0.5, 100.0, rat(1, 3), rat(1, 3), Complex64::new(-1.423038836687106, 0.5301786988003184)),
        (0.5, 100.0, Rational::ONE, rat(1, 2), Complex64::new(-1.0339379224100385, 0.7631966277426427)),
        (0.5, 200.0, rat(1, 4), Rational::ONE, Complex64::new(1.9041189878160818, 1.4437550458379549)),
        (0.5, 100.0, Rational::ONE, Rational::ONE, Complex64::new(2.692619885681324, -0.02038602960259816)),
    ];
    for (sigma, t, a, l, expect) in cases {
        let s = pt(sigma, t);
        let sp = choose_split(t, SplitMode::Balanced).unwrap();
        let p = LerchParams::rational(a, l);
        let r = AfeEngine::builtin().evaluate(EnvelopeKind::for_params(&p), s, p, sp).unwrap();
        assert!(r.reliable);
        let err = (r.value - expect).norm();
        assert!(err <= r.error_estimate, "{a},{l}: err {err} > {}", r.error_estimate);
    }
}

#[test]
fn uncalibrated_engine_is_unreliable() {
    let engine = AfeEngine::new(Calibration::empty());
    let sp = choose_split(100.0, SplitMode::Balanced).unwrap();
    let r = engine.afe_riemann(pt(0.5, 100.0), sp).unwrap();
    assert!(!r.reliable);
    assert!(r.error_estimate.is_infinite());
}

#[test]
fn envelope_fit_rejects_mixed_grid() {
    let grid = calibration_grid(EnvelopeKind::Hurwitz);
    assert!(envelope_fit(EnvelopeKind::Lerch, &grid, Exec::Sequential).is_err());
    assert!(envelope_fit(EnvelopeKind::Lerch, &[], Exec::Sequential).is_err());
}

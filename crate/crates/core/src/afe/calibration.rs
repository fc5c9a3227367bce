use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{envelope_fit, EnvelopeKind, FitPoint, SplitMode};
use crate::complex::ComplexPoint;
use crate::error::{Result, ZetaError};
use crate::par::Exec;
use crate::params::{LerchParams, Rational};
use crate::report::format_sig17;

/// Overrides the calibration file location.
pub const CALIBRATION_ENV: &str = "LERCH_AFE_CALIBRATION";

pub const CALIBRATION_HEIGHTS: [f64; 3] = [50.0, 150.0, 400.0];
pub const CALIBRATION_SIGMAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

// Frozen output of `Calibration::fit(Exec::Sequential)`.
const BUILTIN_LERCH: f64 = 0.723_196_857_545_83;
const BUILTIN_HURWITZ: f64 = 0.115_641_228_508_614_94;
const BUILTIN_RIEMANN: f64 = 0.271_184_668_091_264_96;

const QUARTERS: [(u32, u32); 4] = [(1, 4), (1, 2), (3, 4), (1, 1)];

/// Balanced-split calibration grid for one formula.
pub fn calibration_grid(kind: EnvelopeKind) -> Vec<FitPoint> {
    let r = |(p, q): (u32, u32)| Rational::new(p, q).expect("grid rationals are valid");
    let params: Vec<LerchParams> = match kind {
        EnvelopeKind::Lerch => QUARTERS
            .iter()
            .flat_map(|&a| QUARTERS[..3].iter().map(move |&l| LerchParams::rational(r(a), r(l))))
            .collect(),
        EnvelopeKind::Hurwitz => QUARTERS
            .iter()
            .map(|&a| LerchParams::rational(r(a), Rational::ONE))
            .collect(),
        EnvelopeKind::Riemann => vec![LerchParams::rational(Rational::ONE, Rational::ONE)],
    };
    let mut grid = Vec::new();
    for &t in &CALIBRATION_HEIGHTS {
        for &sigma in &CALIBRATION_SIGMAS {
            let s = ComplexPoint::new(sigma, t).expect("finite grid point");
            for &p in &params {
                grid.push(
                    FitPoint::with_kind(kind, s, p, SplitMode::Balanced)
                        .expect("grid heights exceed 2*pi"),
                );
            }
        }
    }
    grid
}

/// Envelope constants `C_fit` per formula. A kind without a constant yields
/// unreliable AFE results.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Calibration {
    constants: BTreeMap<EnvelopeKind, f64>,
}

impl Calibration {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builtin() -> Self {
        let mut c = Self::empty();
        c.constants.insert(EnvelopeKind::Lerch, BUILTIN_LERCH);
        c.constants.insert(EnvelopeKind::Hurwitz, BUILTIN_HURWITZ);
        c.constants.insert(EnvelopeKind::Riemann, BUILTIN_RIEMANN);
        c
    }

    /// Refits every constant on [`calibration_grid`].
    pub fn fit(exec: Exec) -> Result<Self> {
        let mut c = Self::empty();
        for kind in EnvelopeKind::ALL {
            c.set(kind, envelope_fit(kind, &calibration_grid(kind), exec)?)?;
        }
        Ok(c)
    }

    pub fn get(&self, kind: EnvelopeKind) -> Option<f64> {
        self.constants.get(&kind).copied()
    }

    pub fn set(&mut self, kind: EnvelopeKind, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ZetaError::Calibration(format!(
                "constant for {kind} must be positive and finite, got {value}"
            )));
        }
        self.constants.insert(kind, value);
        Ok(())
    }

    /// `kind = value` lines, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# AFE envelope constants\n");
        for (kind, value) in &self.constants {
            let _ = writeln!(out, "{kind} = {}", format_sig17(*value));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || ZetaError::Calibration(format!("line {}: expected 'kind = value', got '{raw}'", i + 1));
            let (key, value) = line.split_once('=').ok_or_else(bad)?;
            let kind: EnvelopeKind = key.trim().parse().map_err(|_| bad())?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            if c.constants.contains_key(&kind) {
                return Err(ZetaError::Calibration(format!("line {}: duplicate entry for {kind}", i + 1)));
            }
            c.set(kind, value)
                .map_err(|e| ZetaError::Calibration(format!("line {}: {e}", i + 1)))?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ZetaError::Calibration(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| ZetaError::Calibration(format!("cannot write {}: {e}", path.display())))
    }

    /// The file named by `LERCH_AFE_CALIBRATION`, if set.
    pub fn env_path() -> Option<PathBuf> {
        std::env::var_os(CALIBRATION_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    }

    /// Loads `LERCH_AFE_CALIBRATION` when set, else the builtin constants.
    pub fn from_env() -> Result<Self> {
        match Self::env_path() {
            Some(p) => Self::load(&p),
            None => Ok(Self::builtin()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let mut c = Calibration::empty();
        c.set(EnvelopeKind::Lerch, 0.123_456_789_012_345_67).unwrap();
        c.set(EnvelopeKind::Riemann, 3.0e-7 / 7.0).unwrap();
        let back = Calibration::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.get(EnvelopeKind::Hurwitz), None);
    }

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let c = Calibration::parse("# header\n\nhurwitz = 0.5  # trailing\n").unwrap();
        assert_eq!(c.get(EnvelopeKind::Hurwitz), Some(0.5));
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["lerch 0.5", "zeta = 1", "lerch = x", "lerch = -1", "lerch = 1\nlerch = 2"] {
            assert!(matches!(Calibration::parse(text), Err(ZetaError::Calibration(_))), "{text}");
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(calibration_grid(EnvelopeKind::Lerch).len(), 15 * 12);
        assert_eq!(calibration_grid(EnvelopeKind::Hurwitz).len(), 15 * 4);
        assert_eq!(calibration_grid(EnvelopeKind::Riemann).len(), 15);
    }

    #[test]
    fn refit_reproduces_builtin() {
        let fitted = Calibration::fit(Exec::default()).unwrap();
        let builtin = Calibration::builtin();
        for kind in EnvelopeKind::ALL {
            let (a, b) = (fitted.get(kind).unwrap(), builtin.get(kind).unwrap());
            assert!((a - b).abs() <= 1e-9 * b, "{kind}: fitted {a} vs builtin {b}");
        }
    }
}

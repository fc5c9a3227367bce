use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// Largest denominator accepted by the rational-λ decomposition.
pub const MAX_DENOMINATOR: u32 = 64;

/// A reduced fraction `p/q` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: u32,
    den: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(ZetaError::domain(format!(
                "rational parameter must lie in (0, 1], got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// `1 − r`, with `0` mapped to `1`. Both sit in the phase slot of ζ_L,
    /// where `e^{2πin·0} = e^{2πin·1}`.
    pub fn complement(&self) -> Rational {
        if self.num == self.den {
            Rational::ONE
        } else {
            Rational {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    #[inline]
    pub fn num(&self) -> u32 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u32 {
        self.den
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = ZetaError;

    /// Accepts `p/q` or a bare integer (only `1` is in range).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let parse = |x: &str| {
            x.parse::<u32>()
                .map_err(|_| ZetaError::Parse(format!("'{s}' is not of the form p/q")))
        };
        Rational::new(parse(p)?, parse(q)?)
    }
}

/// The pair `(α, λ)` with `0 < α ≤ 1`, `0 < λ ≤ 1`.
///
/// Parameters built from [`Rational`]s keep the exact fractions so the
/// oracles can decompose ζ_L into Hurwitz values; decimal parameters only
/// support the approximate functional equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerchParams {
    alpha: f64,
    lambda: f64,
    exact: Option<(Rational, Rational)>,
}

impl LerchParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("lambda", lambda)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ZetaError::domain(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Ok(LerchParams {
            alpha,
            lambda,
            exact: None,
        })
    }

    pub fn rational(alpha: Rational, lambda: Rational) -> Self {
        LerchParams {
            alpha: alpha.value(),
            lambda: lambda.value(),
            exact: Some((alpha, lambda)),
        }
    }

    /// Convenience for `p/q` string pairs.
    pub fn parse(alpha: &str, lambda: &str) -> Result<Self> {
        Ok(Self::rational(alpha.parse()?, lambda.parse()?))
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn is_hurwitz(&self) -> bool {
        self.lambda == 1.0
    }

    pub fn exact(&self) -> Option<(Rational, Rational)> {
        self.exact
    }

    /// `α` as `p/q` when exact, decimal otherwise.
    pub fn alpha_label(&self) -> String {
        match self.exact {
            Some((a, _)) => a.to_string(),
            None => self.alpha.to_string(),
        }
    }

    pub fn lambda_label(&self) -> String {
        match self.exact {
            Some((_, l)) => l.to_string(),
            None => self.lambda.to_string(),
        }
    }

    pub(crate) fn require_exact(&self) -> Result<(Rational, Rational)> {
        self.exact.ok_or_else(|| {
            ZetaError::domain("oracle evaluation needs rational alpha and lambda (p/q)")
        })
    }
}

impl fmt::Display for LerchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some((a, l)) => write!(f, "alpha={a}, lambda={l}"),
            None => write!(f, "alpha={}, lambda={}", self.alpha, self.lambda),
        }
    }
}

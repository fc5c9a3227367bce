//! Mean square of ζ_L on the critical line.
//!
//! `∫₁ᵀ |ζ_L(1/2+it, α, λ)|² dt` is compared with `T log(T/2π)`. The range
//! `[t₀, T]` with `t₀ = 10` is integrated with the chosen integrand; the stub
//! `[1, t₀]`, where the mean-square split does not exist, always uses the
//! oracle.
//!
//! The AFE and partial-sum integrands jump wherever `⌊x(t)⌋` or `⌊y(t)⌋`
//! changes. Panels are cut at those points so composite Simpson keeps its
//! fourth-order convergence and the step-halving estimate stays honest.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::afe::{afe_value, afe_with_counts, choose_split, first_sum, EnvelopeKind, SplitMode};
use crate::complex::ComplexPoint;
use crate::error::{Result, ZetaError};
use crate::oracle::lerch_oracle;
use crate::par::Exec;
use crate::params::LerchParams;
use crate::report::{format_sig17, CsvRow};

/// Lower end of the AFE / partial-sum range.
pub const T0: f64 = 10.0;
/// Lower end of the whole integral.
pub const T_START: f64 = 1.0;
pub const MIN_T: f64 = 20.0;
pub const DEFAULT_STEP: f64 = 0.02;
pub const MAX_STEP: f64 = 0.05;
/// Quadrature estimates above this fraction of the main term are unreliable.
pub const UNRELIABLE_FRACTION: f64 = 1e-3;
/// Longest panel handed to one worker.
const PANEL_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// AFE with the mean-square split.
    Afe,
    /// Euler–Maclaurin reference; rational parameters only.
    Oracle,
    /// The first AFE sum alone, `Σ_{0≤n≤x} e^{2πinλ}(n+α)^{−1/2−it}`.
    #[serde(rename = "partialsum")]
    PartialSum,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Afe => "afe",
            Method::Oracle => "oracle",
            Method::PartialSum => "partialsum",
        })
    }
}

impl FromStr for Method {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "afe" => Ok(Method::Afe),
            "oracle" => Ok(Method::Oracle),
            "partialsum" | "partial-sum" | "partial_sum" => Ok(Method::PartialSum),
            _ => Err(ZetaError::Parse(format!("unknown integrand method '{s}'"))),
        }
    }
}

/// `T log(T/2π)`.
pub fn main_term(t_max: f64) -> f64 {
    t_max * (t_max / (2.0 * PI)).ln()
}

/// The mean-square cutoff `x(t) = t/(2π√(log t))`.
pub fn partial_sum_cutoff(t: f64) -> f64 {
    t / (2.0 * PI * t.ln().sqrt())
}

fn on_line(t: f64) -> Result<ComplexPoint> {
    ComplexPoint::new(0.5, t)
}

fn check_height(t: f64) -> Result<()> {
    if !(t >= T0) {
        return Err(ZetaError::domain(format!(
            "t = {t} below t0 = {T0}: the mean-square split needs x >= 1 and y >= 1"
        )));
    }
    Ok(())
}

/// ζ_L(1/2+it, α, λ) by the chosen method.
pub fn critical_line_value(t: f64, params: LerchParams, method: Method) -> Result<Complex64> {
    let s = on_line(t)?;
    match method {
        Method::Oracle => Ok(lerch_oracle(s, params)?.value),
        Method::Afe => {
            check_height(t)?;
            let split = choose_split(t, SplitMode::MeanSquare)?;
            Ok(afe_value(EnvelopeKind::for_params(&params), s, params, split)?.value)
        }
        Method::PartialSum => {
            check_height(t)?;
            let m = partial_sum_cutoff(t).floor() as usize;
            Ok(first_sum(s.to_complex(), params.alpha(), params.lambda(), m).0)
        }
    }
}

/// One integrand evaluation with term counts fixed for the whole panel.
fn integrand(t: f64, params: LerchParams, method: Method, counts: (usize, usize)) -> Result<f64> {
    let s = on_line(t)?;
    let v = match method {
        Method::Oracle => lerch_oracle(s, params)?.value,
        Method::Afe => afe_with_counts(EnvelopeKind::for_params(&params), s, params, counts)?,
        Method::PartialSum => first_sum(s.to_complex(), params.alpha(), params.lambda(), counts.0).0,
    };
    Ok(v.norm_sqr())
}

/// Solves `x(t) = k` for `t ≥ T0` by bisection; `x` is increasing there.
fn cutoff_crossing(k: f64) -> f64 {
    let (mut lo, mut hi) = (T0, 2.0 * T0);
    while partial_sum_cutoff(hi) < k {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if partial_sum_cutoff(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Points in `(a, b)` where the term counts of the mean-square split change.
fn count_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = partial_sum_cutoff(a).floor() + 1.0;
    while k <= partial_sum_cutoff(b) {
        out.push(cutoff_crossing(k));
        k += 1.0;
    }
    // y(t) = √(log t) = k at t = e^{k²}.
    let mut k = a.ln().sqrt().floor() + 1.0;
    while (k * k).exp() < b {
        out.push((k * k).exp());
        k += 1.0;
    }
    out.retain(|&t| t > a && t < b);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    a: f64,
    b: f64,
    counts: (usize, usize),
    /// Index of the checkpoint this panel ends on.
    closes: Option<usize>,
}

/// Panels covering `[start, checkpoints.last()]`, cut at every checkpoint
/// and, when `cut_counts`, at every count change.
fn panels(start: f64, checkpoints: &[f64], cut_counts: bool) -> Vec<Panel> {
    let end = *checkpoints.last().expect("nonempty");
    let mut cuts: Vec<f64> = checkpoints.to_vec();
    if cut_counts {
        cuts.extend(count_breaks(start, end));
    }
    cuts.retain(|&t| t > start);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::new();
    let mut a = start;
    for &b in &cuts {
        let pieces = ((b - a) / PANEL_MAX).ceil().max(1.0) as usize;
        let closes = checkpoints.iter().position(|&c| c == b);
        for i in 0..pieces {
            let pa = a + (b - a) * i as f64 / pieces as f64;
            let pb = if i + 1 == pieces { b } else { a + (b - a) * (i + 1) as f64 / pieces as f64 };
            let mid = 0.5 * (pa + pb);
            let counts = if mid >= T0 {
                (partial_sum_cutoff(mid).floor() as usize, mid.ln().sqrt().floor() as usize)
            } else {
                (0, 0)
            };
            out.push(Panel {
                a: pa,
                b: pb,
                counts,
                closes: if i + 1 == pieces { closes } else { None },
            });
        }
        a = b;
    }
    out
}

/// Composite Simpson at spacing `h` and `h/2` from `2n+1` samples.
fn simpson_pair(samples: &[f64], coarse_h: f64) -> (f64, f64) {
    let m = samples.len() - 1;
    debug_assert!(m.is_multiple_of(4));
    let weighted = |step: usize| -> f64 {
        let n = m / step;
        let mut acc = samples[0] + samples[m];
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * samples[i * step];
        }
        acc
    };
    let fine_h = 0.5 * coarse_h;
    (coarse_h / 3.0 * weighted(2), fine_h / 3.0 * weighted(1))
}

/// `(I(h), I(h/2))` on one panel.
fn panel_integrals(p: &Panel, params: LerchParams, method: Method, step: f64) -> Result<(f64, f64)> {
    let len = p.b - p.a;
    let n = (2.0 * (len / (2.0 * step)).ceil()).max(2.0) as usize;
    let fine = 2 * n;
    let mut samples = Vec::with_capacity(fine + 1);
    for i in 0..=fine {
        let t = if i == fine { p.b } else { p.a + len * i as f64 / fine as f64 };
        samples.push(integrand(t, params, method, p.counts)?);
    }
    Ok(simpson_pair(&samples, len / n as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSquareRecord {
    #[serde(rename = "T")]
    pub t_max: f64,
    pub alpha: String,
    pub lambda: String,
    pub integral: f64,
    pub main_term: f64,
    pub residual: f64,
    pub quad_err: f64,
    pub method: Method,
    pub step: f64,
    pub reliable: bool,
}

impl CsvRow for MeanSquareRecord {
    fn header() -> &'static [&'static str] {
        &["T", "alpha", "lambda", "integral", "main_term", "residual", "quad_err", "method", "step"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            format_sig17(self.t_max),
            self.alpha.clone(),
            self.lambda.clone(),
            format_sig17(self.integral),
            format_sig17(self.main_term),
            format_sig17(self.residual),
            format_sig17(self.quad_err),
            self.method.to_string(),
            format_sig17(self.step),
        ]
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(ZetaError::domain(format!("step must lie in (0, {MAX_STEP}], got {step}")));
    }
    Ok(())
}

/// Mean squares at every checkpoint, sharing one pass over the panels.
/// Records are cumulative, so the integrals are nondecreasing in `T`.
pub fn mean_square_ladder(
    checkpoints: &[f64],
    params: LerchParams,
    step: f64,
    method: Method,
    exec: Exec,
) -> Result<Vec<MeanSquareRecord>> {
    check_step(step)?;
    if checkpoints.is_empty() {
        return Err(ZetaError::config("mean-square ladder needs at least one T"));
    }
    let mut ts = checkpoints.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if let Some(&bad) = ts.iter().find(|&&t| !(t >= MIN_T && t.is_finite())) {
        return Err(ZetaError::domain(format!("T = {bad} below the minimum {MIN_T}")));
    }
    // The stub always uses the oracle.
    params.require_exact()?;

    let stub = panels(T_START, &[T0], false);
    let stub = exec.try_map(&stub, |p| panel_integrals(p, params, Method::Oracle, step))?;
    let body = panels(T0, &ts, method != Method::Oracle);
    let values = exec.try_map(&body, |p| panel_integrals(p, params, method, step))?;

    let (mut coarse, mut fine) = stub.iter().fold((0.0, 0.0), |(c, f), &(pc, pf)| (c + pc, f + pf));
    let mut out = Vec::with_capacity(ts.len());
    for (p, (pc, pf)) in body.iter().zip(values) {
        coarse += pc;
        fine += pf;
        if let Some(i) = p.closes {
            let t_max = ts[i];
            let main = main_term(t_max);
            let quad_err = (coarse - fine).abs() / 15.0;
            out.push(MeanSquareRecord {
                t_max,
                alpha: params.alpha_label(),
                lambda: params.lambda_label(),
                integral: fine,
                main_term: main,
                residual: fine - main,
                quad_err,
                method,
                step,
                reliable: quad_err <= UNRELIABLE_FRACTION * main,
            });
        }
    }
    Ok(out)
}

pub fn mean_square_integral(
    t_max: f64,
    params: LerchParams,
    step: f64,
    method: Method,
    exec: Exec,
) -> Result<MeanSquareRecord> {
    Ok(mean_square_ladder(&[t_max], params, step, method, exec)?.remove(0))
}

/// `T/2^{n−1}, …, T/2, T`.
pub fn geometric_ladder(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).rev().map(|k| t_max / 2f64.powi(k as i32)).collect()
}

/// Fit of `|residual| ≈ C·T(log T)^e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub constant: f64,
    /// Some residual was at or below its quadrature noise, or the records
    /// were unreliable, so the logarithms are not meaningful.
    pub degenerate: bool,
}

/// Least squares of `log(|r|/T)` against `log log T`.
pub fn fit_residual_exponent(ts: &[f64], residuals: &[f64]) -> Result<ExponentFit> {
    if ts.len() != residuals.len() {
        return Err(ZetaError::config("heights and residuals differ in length"));
    }
    if ts.len() < 4 {
        return Err(ZetaError::config(format!(
            "exponent fit needs at least 4 points, got {}",
            ts.len()
        )));
    }
    if let Some(&t) = ts.iter().find(|&&t| !(t > std::f64::consts::E && t.is_finite())) {
        return Err(ZetaError::domain(format!("exponent fit needs T > e, got {t}")));
    }
    let mut degenerate = false;
    let points: Vec<(f64, f64)> = ts
        .iter()
        .zip(residuals)
        .map(|(&t, &r)| {
            let r = r.abs();
            if !(r > 0.0 && r.is_finite()) {
                degenerate = true;
            }
            (t.ln().ln(), (r.max(f64::MIN_POSITIVE) / t).ln())
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(ZetaError::config("exponent fit needs distinct heights"));
    }
    let exponent = sxy / sxx;
    Ok(ExponentFit {
        exponent,
        constant: (my - exponent * mx).exp(),
        degenerate,
    })
}

/// Integrates on `tgrid` and fits the residual exponent.
pub fn residual_exponent_fit(
    params: LerchParams,
    tgrid: &[f64],
    step: f64,
    method: Method,
    exec: Exec,
) -> Result<(Vec<MeanSquareRecord>, ExponentFit)> {
    let records = mean_square_ladder(tgrid, params, step, method, exec)?;
    let fit = fit_records(&records)?;
    Ok((records, fit))
}

/// Exponent fit over computed records.
pub fn fit_records(records: &[MeanSquareRecord]) -> Result<ExponentFit> {
    let ts: Vec<f64> = records.iter().map(|r| r.t_max).collect();
    let rs: Vec<f64> = records.iter().map(|r| r.residual).collect();
    let mut fit = fit_residual_exponent(&ts, &rs)?;
    fit.degenerate |= records
        .iter()
        .any(|r| !r.reliable || r.residual.abs() <= 2.0 * r.quad_err);
    Ok(fit)
}

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lerch_afe::afe::{afe_scan, calibration_grid, AfeCheck, FitPoint, CALIBRATION_HEIGHTS, CALIBRATION_SIGMAS};
use lerch_afe::functional::{
    default_fe_grid, fe_hurwitz_rhs, fe_lerch_rhs, fe_residual_scan, fe_riemann_rhs, FeKind, FePoint, FeRecord,
    DEFAULT_HEIGHTS, DEFAULT_SIGMAS,
};
use lerch_afe::mean_square::{fit_records, geometric_ladder, mean_square_ladder, Method};
use lerch_afe::oracle::lerch_oracle;
use lerch_afe::report::{format_sig17, CsvRow};
use lerch_afe::{
    choose_split, AfeEngine, AfeSplit, Calibration, ComplexPoint, EnvelopeKind, EulerMaclaurinConfig, EvalResult,
    Exec, LerchParams, Rational, SplitMode,
};

use crate::output::{Sink, Table};
use crate::{CliError, Status};

/// Default calibration file when neither `--out` nor the environment names one.
const DEFAULT_CALIBRATION_FILE: &str = "afe_calibration.txt";

/// Bound on the functional-equation residual reported by `fecheck`.
const FE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    Afe,
    Oracle,
    Fe,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    /// `p/q`, or a decimal for `--method afe`.
    #[arg(long, default_value = "1")]
    alpha: String,
    #[arg(long, default_value = "1")]
    lambda: String,
    #[arg(long, value_enum, default_value = "afe")]
    method: EvalMethod,
    /// `balanced`, `meansquare`, `skew-low`, `skew-high`, `scaled:k` or `x=..,y=..`.
    #[arg(long, default_value = "balanced")]
    split: String,
    /// Force an AFE formula instead of choosing one from the parameters.
    #[arg(long)]
    kind: Option<EnvelopeKind>,
}

#[derive(Debug, Args)]
pub struct AfeScanArgs {
    #[arg(long, default_value = "lerch")]
    kind: EnvelopeKind,
    /// Comma-separated heights (default: the calibration heights).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
    #[arg(long, default_value = "balanced")]
    split: SplitMode,
}

#[derive(Debug, Args)]
pub struct FeCheckArgs {
    #[arg(long, default_value = "lerch")]
    kind: FeKind,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Fit only this formula; others already in the file are kept.
    #[arg(long)]
    kind: Option<EnvelopeKind>,
}

#[derive(Debug, Args)]
pub struct MeanSquareArgs {
    #[arg(long = "T", default_value_t = 2000.0)]
    t_max: f64,
    #[arg(long, default_value = "1/2")]
    alpha: String,
    #[arg(long, default_value = "1/2")]
    lambda: String,
    /// Number of checkpoints T/2^(n-1), ..., T/2, T.
    #[arg(long, default_value_t = 4)]
    ladder: usize,
    #[arg(long, default_value_t = lerch_afe::mean_square::DEFAULT_STEP)]
    step: f64,
    #[arg(long, default_value = "afe")]
    method: Method,
}

fn parse_params(alpha: &str, lambda: &str, allow_decimal: bool) -> Result<LerchParams, CliError> {
    if let (Ok(a), Ok(l)) = (alpha.parse::<Rational>(), lambda.parse::<Rational>()) {
        return Ok(LerchParams::rational(a, l));
    }
    let decimal = |name: &str, v: &str| {
        v.parse::<Rational>().map(|r| r.value()).or_else(|_| {
            v.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{name} must be p/q or a decimal, got '{v}'")))
        })
    };
    let (a, l) = (decimal("alpha", alpha)?, decimal("lambda", lambda)?);
    if !allow_decimal {
        return Err(CliError::Usage("this method needs rational alpha and lambda (p/q)".into()));
    }
    let params = LerchParams::new(a, l)?;
    eprintln!("warning: decimal parameters are not exact; AFE only, no oracle comparison");
    Ok(params)
}

fn parse_split(text: &str, t: f64) -> Result<AfeSplit, CliError> {
    if text.contains('=') {
        let mut x = None;
        let mut y = None;
        for part in text.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("bad split component '{part}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad split value '{v}'")))?;
            match k.trim() {
                "x" => x = Some(v),
                "y" => y = Some(v),
                other => return Err(CliError::Usage(format!("unknown split component '{other}'"))),
            }
        }
        match (x, y) {
            (Some(x), Some(y)) => Ok(AfeSplit::new(x, y)?),
            _ => Err(CliError::Usage("split needs both x= and y=".into())),
        }
    } else {
        Ok(choose_split(t, text.parse()?)?)
    }
}

fn engine() -> Result<AfeEngine, CliError> {
    Ok(AfeEngine::new(Calibration::from_env()?))
}

struct EvalRow {
    s: ComplexPoint,
    params: LerchParams,
    method: EvalMethod,
    formula: String,
    result: EvalResult,
}

impl CsvRow for EvalRow {
    fn header() -> &'static [&'static str] {
        &[
            "sigma", "t", "alpha", "lambda", "method", "formula", "re", "im", "error_estimate", "main_terms",
            "dual_terms", "reliable",
        ]
    }

    fn fields(&self) -> Vec<String> {
        let r = &self.result;
        vec![
            format_sig17(self.s.sigma()),
            format_sig17(self.s.t()),
            self.params.alpha_label(),
            self.params.lambda_label(),
            self.method.to_possible_value().expect("no skipped variants").get_name().to_string(),
            self.formula.clone(),
            format_sig17(r.value.re),
            format_sig17(r.value.im),
            format_sig17(r.error_estimate),
            r.main_terms.to_string(),
            r.dual_terms.to_string(),
            r.reliable.to_string(),
        ]
    }
}

pub fn eval(args: &EvalArgs, sink: &Sink) -> Result<Status, CliError> {
    let s = ComplexPoint::new(args.sigma, args.t)?;
    let params = parse_params(&args.alpha, &args.lambda, args.method == EvalMethod::Afe)?;
    let (formula, result) = match args.method {
        EvalMethod::Afe => {
            let kind = args.kind.unwrap_or_else(|| EnvelopeKind::for_params(&params));
            let split = parse_split(&args.split, args.t)?;
            (kind.to_string(), engine()?.evaluate(kind, s, params, split)?)
        }
        EvalMethod::Oracle => ("euler-maclaurin".to_string(), lerch_oracle(s, params)?),
        EvalMethod::Fe => {
            let (a, l) = params.exact().expect("parsed as rational");
            let cfg = EulerMaclaurinConfig::for_height(s.t());
            let (kind, r) = if !l.is_one() {
                (FeKind::Lerch, fe_lerch_rhs(s, a, l, cfg)?)
            } else if !a.is_one() {
                (FeKind::Hurwitz, fe_hurwitz_rhs(s, a, cfg)?)
            } else {
                (FeKind::Riemann, fe_riemann_rhs(s, cfg)?)
            };
            (kind.to_string(), r)
        }
    };
    let row = EvalRow {
        s,
        params,
        method: args.method,
        formula,
        result,
    };
    sink.emit(&Table::from_rows(std::slice::from_ref(&row)), None)?;
    Ok(if result.reliable { Status::Clean } else { Status::Unreliable(1) })
}

struct ScanRow {
    check: AfeCheck,
    reliable: bool,
}

impl CsvRow for ScanRow {
    fn header() -> &'static [&'static str] {
        &[
            "sigma", "t", "alpha", "lambda", "kind", "split", "x", "y", "afe_re", "afe_im", "oracle_re", "oracle_im",
            "abs_error", "envelope", "ratio", "reliable",
        ]
    }

    fn fields(&self) -> Vec<String> {
        let c = &self.check;
        let p = &c.point;
        vec![
            format_sig17(p.s.sigma()),
            format_sig17(p.s.t()),
            p.params.alpha_label(),
            p.params.lambda_label(),
            p.kind.to_string(),
            p.mode.to_string(),
            format_sig17(p.split.x()),
            format_sig17(p.split.y()),
            format_sig17(c.afe.re),
            format_sig17(c.afe.im),
            format_sig17(c.oracle.re),
            format_sig17(c.oracle.im),
            format_sig17(c.abs_error),
            format_sig17(c.envelope),
            format_sig17(c.ratio()),
            self.reliable.to_string(),
        ]
    }
}

fn distinct<T: PartialEq + Copy>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn or_default(given: &[f64], default: &[f64]) -> Vec<f64> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

fn count_unreliable<T>(items: &[T], ok: impl Fn(&T) -> bool) -> Status {
    match items.iter().filter(|x| !ok(x)).count() {
        0 => Status::Clean,
        n => Status::Unreliable(n),
    }
}

pub fn afescan(args: &AfeScanArgs, sink: &Sink) -> Result<Status, CliError> {
    let params = distinct(calibration_grid(args.kind).iter().map(|p| p.params));
    let mut grid = Vec::new();
    for t in or_default(&args.t, &CALIBRATION_HEIGHTS) {
        for &sigma in &or_default(&args.sigma, &CALIBRATION_SIGMAS) {
            let s = ComplexPoint::new(sigma, t)?;
            for &p in &params {
                grid.push(FitPoint::with_kind(args.kind, s, p, args.split)?);
            }
        }
    }
    let constant = engine()?.calibration().get(args.kind);
    let rows: Vec<ScanRow> = afe_scan(&grid, Exec::Parallel)?
        .into_iter()
        .map(|check| ScanRow {
            reliable: check.oracle_reliable && constant.is_none_or(|c| check.ratio() <= c),
            check,
        })
        .collect();
    let worst = rows.iter().map(|r| r.check.ratio()).fold(0.0, f64::max);
    let summary = match constant {
        Some(c) => format!(
            "max_ratio = {worst:.6} over {} points; C_fit[{}] = {c:.6}",
            rows.len(),
            args.kind
        ),
        None => format!("max_ratio = {worst:.6} over {} points; {} is uncalibrated", rows.len(), args.kind),
    };
    sink.emit(&Table::from_rows(&rows), Some(&summary))?;
    Ok(count_unreliable(&rows, |r| r.reliable))
}

pub fn fecheck(args: &FeCheckArgs, sink: &Sink) -> Result<Status, CliError> {
    let defaults = default_fe_grid(args.kind);
    let grid: Vec<FePoint> = if args.t.is_empty() && args.sigma.is_empty() {
        defaults
    } else {
        let pairs = distinct(defaults.iter().map(|p| (p.alpha, p.lambda)));
        let mut grid = Vec::new();
        for t in or_default(&args.t, &DEFAULT_HEIGHTS) {
            for &sigma in &or_default(&args.sigma, &DEFAULT_SIGMAS) {
                let s = ComplexPoint::new(sigma, t)?;
                grid.extend(pairs.iter().map(|&(alpha, lambda)| FePoint { kind: args.kind, s, alpha, lambda }));
            }
        }
        grid
    };
    let records = fe_residual_scan(&grid, Exec::Parallel)?;
    let worst = records.first().map_or(0.0, |r| r.residual);
    let cmp = if worst <= FE_TOLERANCE { "<=" } else { ">" };
    let summary = format!(
        "max_residual = {worst:.3e} {cmp} {FE_TOLERANCE:.0e} over {} points ({} equation)",
        records.len(),
        args.kind
    );
    sink.emit(&Table::from_rows(&records), Some(&summary))?;
    Ok(count_unreliable(&records, |r: &FeRecord| r.reliable() && r.within(FE_TOLERANCE)))
}

pub fn calibrate(args: &CalibrateArgs, sink: &Sink) -> Result<Status, CliError> {
    let path: PathBuf = sink
        .out
        .clone()
        .or_else(Calibration::env_path)
        .unwrap_or_else(|| DEFAULT_CALIBRATION_FILE.into());
    let mut calibration = if path.exists() {
        Calibration::load(&path)?
    } else {
        Calibration::empty()
    };
    let kinds: Vec<EnvelopeKind> = match args.kind {
        Some(k) => vec![k],
        None => EnvelopeKind::ALL.to_vec(),
    };
    let mut unreliable = 0;
    let mut lines = Vec::new();
    for kind in kinds {
        let grid = calibration_grid(kind);
        let checks = afe_scan(&grid, Exec::Parallel)?;
        unreliable += checks.iter().filter(|c| !c.oracle_reliable).count();
        let c = checks.iter().map(AfeCheck::ratio).fold(0.0, f64::max);
        calibration.set(kind, c)?;
        lines.push(format!("C_fit[{kind}] = {} ({} points)", format_sig17(c), grid.len()));
    }
    let mut text = String::new();
    if let Some(m) = sink.meta_line() {
        text.push_str(&m);
        text.push('\n');
    }
    text.push_str(&calibration.to_text());
    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    for line in lines {
        println!("{line}");
    }
    println!("wrote {}", path.display());
    Ok(if unreliable == 0 { Status::Clean } else { Status::Unreliable(unreliable) })
}

pub fn meansquare(args: &MeanSquareArgs, sink: &Sink) -> Result<Status, CliError> {
    if args.ladder == 0 {
        return Err(CliError::Usage("--ladder must be at least 1".into()));
    }
    let params = parse_params(&args.alpha, &args.lambda, false)?;
    let checkpoints = geometric_ladder(args.t_max, args.ladder);
    let records = mean_square_ladder(&checkpoints, params, args.step, args.method, Exec::Parallel)?;
    let worst = records
        .iter()
        .map(|r| (r.residual / r.main_term).abs())
        .fold(0.0, f64::max);
    let mut summary = format!("max |residual|/main_term = {worst:.4}");
    if records.len() >= 4 {
        let fit = fit_records(&records)?;
        summary.push_str(&format!("; fitted exponent = {:.4}", fit.exponent));
        if fit.degenerate {
            summary.push_str(" (degenerate)");
        }
    }
    sink.emit(&Table::from_rows(&records), Some(&summary))?;
    Ok(count_unreliable(&records, |r| r.reliable))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_split() {
        let s = parse_split("x=2, y=3", 12.0 * std::f64::consts::PI).unwrap();
        assert_eq!((s.x(), s.y()), (2.0, 3.0));
        assert!(parse_split("x=2", 100.0).is_err());
        assert!(parse_split("x=2,z=3", 100.0).is_err());
        assert!(parse_split("x=2,y=oops", 100.0).is_err());
        assert!(parse_split("balanced", 1.0).is_err());
    }

    #[test]
    fn params_rational_or_decimal() {
        let p = parse_params("1/2", "1", false).unwrap();
        assert_eq!(p.exact().map(|(a, _)| a.to_string()), Some("1/2".into()));
        assert!(parse_params("0.5", "1", false).is_err());
        let p = parse_params("0.5", "1", true).unwrap();
        assert!(p.exact().is_none());
        assert!(parse_params("x", "1", true).is_err());
        assert!(parse_params("2", "1", true).is_err());
    }
}

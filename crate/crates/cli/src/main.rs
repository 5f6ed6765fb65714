use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypsum::asymptotics::{fit_slope, first_term, geometric_grid, Precision};
use hypsum::verify::{self, SuiteOptions, SuiteReport};
use hypsum::{evaluate_many, EvalOptions, EvalReport, Error, SeriesParams, TailControl, Theorem};
use serde::Serialize;

const EXIT_PARSE: u8 = 2;
const EXIT_TAIL: u8 = 3;
const EXIT_DEGENERATE_FIT: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

/// Default k-series tolerance when working in double-double.
const DD_REL_TOL: f64 = 1e-18;

#[derive(Debug, Parser)]
#[command(name = "hypsum", version, about = "Partial sums of p+1Fp series at unit argument and their asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Direct partial sum, expansion and residual at each m.
    Eval(EvalArgs),
    /// Residuals over an m-grid plus the fitted log-log slope.
    Sweep(SweepArgs),
    /// Run built-in verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Upper parameters a_1,...,a_{p+1}.
    #[arg(long, value_parser = parse_list::<f64>, allow_hyphen_values = true, required = true)]
    a: List<f64>,

    /// Lower parameters b_1,...,b_p.
    #[arg(long, value_parser = parse_list::<f64>, allow_hyphen_values = true, required = true)]
    b: List<f64>,

    /// Truncation order N of the general expansion.
    #[arg(long = "n")]
    n_order: Option<usize>,

    /// Use this expansion instead of the dispatched one (T2..T7).
    #[arg(long, value_parser = parse_theorem)]
    theorem: Option<Theorem>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Report values multiplied by this factor over the first series term.
    #[arg(long, value_enum, default_value_t = Scale::None)]
    scale: Scale,

    /// double or dd (double-double); sweep defaults to dd, eval to double.
    #[arg(long, value_parser = parse_precision)]
    precision: Option<Precision>,

    /// Relative tolerance for the infinite k-series [default: 1e-14, or
    /// 1e-18 in double-double].
    #[arg(long, env = "HYPSUM_REL_TOL", value_parser = parse_tol)]
    rel_tol: Option<f64>,

    /// Hard cap on k-series terms.
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    series: SeriesArgs,

    /// One or more m values.
    #[arg(long, value_parser = parse_list::<usize>, required = true)]
    m: List<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    series: SeriesArgs,

    /// Strictly increasing m values (at least six).
    #[arg(long, value_parser = parse_list::<usize>, conflicts_with = "grid", required_unless_present = "grid")]
    m: Option<List<usize>>,

    /// Geometric grid START,COUNT meaning START·2^k for k < COUNT.
    #[arg(long, value_parser = parse_list::<usize>)]
    grid: Option<List<usize>>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suites to run; all when omitted.
    #[arg(long = "suite", value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
    suites: Vec<String>,

    #[arg(long, default_value_t = 1000)]
    m: usize,

    /// Corollary-2 parameters; repeat for several triples.
    #[arg(long, value_parser = parse_list::<f64>)]
    abc: Vec<List<f64>>,

    /// Series order(s) for ak-cross.
    #[arg(long, value_parser = parse_list::<usize>)]
    p: Option<List<usize>>,

    /// Largest k for ak-cross.
    #[arg(long, default_value_t = 20)]
    k: usize,

    /// Random draws for the randomized suites.
    #[arg(long)]
    draws: Option<usize>,

    #[arg(long, default_value_t = 7)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Scale {
    None,
    /// π²/4 times the series normalized to a first term of one.
    #[value(name = "pi2over4")]
    Pi2Over4,
}

/// Comma-separated values of one flag.
#[derive(Debug, Clone, PartialEq)]
struct List<T>(Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<List<T>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<T>().map_err(|_| format!("cannot parse `{tok}`"))
        })
        .collect::<Result<Vec<T>, String>>()
        .map(List)
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|_| format!("unknown theorem `{s}` (expected T2..T7)"))
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse().map_err(|_| format!("unknown precision `{s}` (expected double or dd)"))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(t) if t > 0.0 && t < 1.0 => Ok(t),
        Ok(_) => Err(format!("tolerance `{s}` must lie in (0, 1)")),
        Err(_) => Err(format!("cannot parse `{s}`")),
    }
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, hint) = match e {
            Error::Tail { .. } => (EXIT_TAIL, "; loosen --rel-tol (HYPSUM_REL_TOL) or switch --precision"),
            Error::Convergence { .. } => (EXIT_TAIL, ""),
            Error::InvalidParams(_) => (EXIT_PARSE, ""),
            _ => (1, ""),
        };
        Failure {
            code,
            message: format!("{e}{hint}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    a: &'a [f64],
    b: &'a [f64],
    s: f64,
    theorem: Option<Theorem>,
    n_order: Option<usize>,
    precision: &'static str,
    scale: Scale,
    rel_tol: f64,
    k_max: usize,
    version: &'static str,
}

#[derive(Serialize)]
struct Fit {
    slope: f64,
    predicted_slope: f64,
}

#[derive(Serialize)]
struct JsonOut<'a> {
    metadata: Metadata<'a>,
    rows: &'a [EvalReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<Fit>,
}

struct Prepared {
    params: SeriesParams,
    opts: EvalOptions,
}

fn prepare(args: &SeriesArgs, precision: Precision) -> Result<Prepared, Failure> {
    let params = SeriesParams::new(args.a.0.clone(), args.b.0.clone())
        .map_err(|e| Failure::parse(e.to_string()))?;
    let precision = args.precision.unwrap_or(precision);
    let mut ctl = TailControl::default();
    match (args.rel_tol, precision) {
        (Some(t), _) => ctl.rel_tol = t,
        (None, Precision::DoubleDouble) => ctl.rel_tol = DD_REL_TOL,
        (None, Precision::Double) => {}
    }
    if let Some(k) = args.k_max {
        ctl.k_max = k;
    }
    ctl.validate().map_err(|e| Failure::parse(e.to_string()))?;
    let opts = EvalOptions {
        n_order: args.n_order,
        force_theorem: args.theorem,
        ctl,
        precision,
        ..EvalOptions::default()
    };
    Ok(Prepared { params, opts })
}

fn rows_for(prep: &Prepared, ms: &[usize], scale: Scale) -> Result<Vec<EvalReport>, Failure> {
    let mut rows = evaluate_many(&prep.params, ms, &prep.opts)?;
    if scale == Scale::Pi2Over4 {
        let f = std::f64::consts::PI.powi(2) / 4.0 / first_term::<f64>(&prep.params)?;
        for r in &mut rows {
            r.direct *= f;
            r.asymptotic *= f;
            r.residual *= f;
        }
    }
    Ok(rows)
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Double => "double",
        Precision::DoubleDouble => "double-double",
    }
}

fn emit(
    args: &SeriesArgs,
    prep: &Prepared,
    rows: &[EvalReport],
    fit: Option<Fit>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    match args.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut *out);
            w.write_record(["m", "direct", "asymptotic", "residual", "predicted_order", "theorem"])?;
            for r in rows {
                w.write_record([
                    r.m.to_string(),
                    format!("{:.16e}", r.direct),
                    format!("{:.16e}", r.asymptotic),
                    format!("{:.16e}", r.residual),
                    format!("{:.16e}", r.predicted_order),
                    r.theorem.to_string(),
                ])?;
            }
            if let Some(fit) = fit {
                w.write_record([
                    "slope".to_string(),
                    format!("{:.16e}", fit.slope),
                    "predicted".to_string(),
                    format!("{:.16e}", fit.predicted_slope),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = JsonOut {
                metadata: Metadata {
                    a: prep.params.a(),
                    b: prep.params.b(),
                    s: prep.params.s_exponent(),
                    theorem: rows.first().map(|r| r.theorem),
                    n_order: prep.opts.n_order,
                    precision: precision_name(prep.opts.precision),
                    scale: args.scale,
                    rel_tol: prep.opts.ctl.rel_tol,
                    k_max: prep.opts.ctl.k_max,
                    version: env!("CARGO_PKG_VERSION"),
                },
                rows,
                fit,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn run_eval(args: &EvalArgs, out: &mut impl Write) -> Result<u8, Failure> {
    let prep = prepare(&args.series, Precision::Double)?;
    let rows = rows_for(&prep, &args.m.0, args.series.scale)?;
    emit(&args.series, &prep, &rows, None, out)?;
    Ok(0)
}

fn run_sweep(args: &SweepArgs, out: &mut impl Write) -> Result<u8, Failure> {
    let ms = match (&args.grid, &args.m) {
        (Some(List(g)), _) if g.len() == 2 && g[0] > 0 && g[1] < 40 => geometric_grid(g[0], g[1]),
        (Some(_), _) => return Err(Failure::parse("--grid expects START,COUNT with START >= 1")),
        (None, Some(List(m))) => m.clone(),
        (None, None) => return Err(Failure::parse("sweep needs --m or --grid")),
    };
    if ms.len() < 6 {
        return Err(Failure::parse(format!("sweep needs at least 6 m values, got {}", ms.len())));
    }
    if let Some(w) = ms.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Failure::parse(format!("m values must increase strictly: `{}` then `{}`", w[0], w[1])));
    }
    let prep = prepare(&args.series, Precision::DoubleDouble)?;
    let rows = rows_for(&prep, &ms, args.series.scale)?;
    let fit = match fit_rows(&ms, &rows) {
        Ok(fit) => fit,
        Err(f) => {
            emit(&args.series, &prep, &rows, None, out)?;
            return Err(f);
        }
    };
    emit(&args.series, &prep, &rows, Some(fit), out)?;
    Ok(0)
}

fn fit_rows(ms: &[usize], rows: &[EvalReport]) -> Result<Fit, Failure> {
    if let Some(r) = rows.iter().find(|r| r.residual == 0.0) {
        return Err(Failure {
            code: EXIT_DEGENERATE_FIT,
            message: format!("residual is exactly zero at m = {}; slope fit is degenerate", r.m),
        });
    }
    let residuals: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    Ok(Fit {
        slope: fit_slope(ms, &residuals)?,
        predicted_slope: -rows[0].predicted_order,
    })
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    suite: &'a str,
    passed: bool,
    max_error: Option<f64>,
    checks: &'a [verify::Check],
}

fn run_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<u8, Failure> {
    let mut opts = SuiteOptions {
        m: args.m,
        k: args.k,
        draws: args.draws,
        seed: args.seed,
        ..SuiteOptions::default()
    };
    if !args.abc.is_empty() {
        opts.abc = args
            .abc
            .iter()
            .map(|List(v)| match v.as_slice() {
                &[a, b, c] => Ok((a, b, c)),
                _ => Err(Failure::parse(format!("--abc expects three values, got {}", v.len()))),
            })
            .collect::<Result<_, _>>()?;
    }
    if let Some(List(p)) = &args.p {
        opts.p = p.clone();
    }
    let names: Vec<&str> = if args.suites.is_empty() {
        verify::SUITES.to_vec()
    } else {
        args.suites.iter().map(String::as_str).collect()
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        reports.extend(verify::run_suite(name, &opts)?);
    }
    match args.format {
        Format::Csv => {
            for r in &reports {
                write!(out, "{r}")?;
            }
        }
        Format::Json => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .map(|r| VerifyRow {
                    suite: &r.name,
                    passed: r.passed(),
                    max_error: r.max_error(),
                    checks: &r.checks,
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Eval(args) => run_eval(args, &mut out),
        Command::Sweep(args) => run_sweep(args, &mut out),
        Command::Verify(args) => run_verify(args, &mut out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(m: usize, residual: f64) -> EvalReport {
        EvalReport {
            m,
            direct: 1.0,
            asymptotic: 1.0 - residual,
            residual,
            predicted_order: 2.0,
            theorem: Theorem::T3,
        }
    }

    #[test]
    fn zero_residual_is_a_degenerate_fit() {
        let ms = [1, 2, 4, 8, 16, 32];
        let mut rows: Vec<EvalReport> = ms.iter().map(|&m| row(m, 1.0 / (m * m) as f64)).collect();
        let fit = fit_rows(&ms, &rows).ok().unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert_eq!(fit.predicted_slope, -2.0);
        rows[3].residual = 0.0;
        let err = fit_rows(&ms, &rows).err().unwrap();
        assert_eq!(err.code, EXIT_DEGENERATE_FIT);
        assert!(err.message.contains("m = 8"));
    }

    #[test]
    fn list_parser_names_the_bad_token() {
        assert_eq!(parse_list::<f64>("0.5, 1.5").unwrap(), List(vec![0.5, 1.5]));
        let e = parse_list::<usize>("10,2x0,30").unwrap_err();
        assert!(e.contains("`2x0`"), "{e}");
        assert!(parse_tol("0").is_err());
        assert!(parse_tol("1e-12").is_ok());
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let tail = Error::Tail { series: "g0", value: 1.0, bound: 1.0, terms: 1 };
        assert_eq!(Failure::from(tail).code, EXIT_TAIL);
        assert_eq!(Failure::from(Error::Convergence { index: 3, value: -0.5 }).code, EXIT_TAIL);
        assert_eq!(Failure::from(Error::InvalidParams("x".into())).code, EXIT_PARSE);
    }
}

//! Command-line front end. `run` is the whole program; the binary only
//! forwards arguments and the exit code.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 numerical
//! convergence failure, 1 I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::model::PotentialKind;
use crate::oracle::BasisSpec;
use crate::report::{self, CompareOptions, Method, ReportDocument, SweepGrid};
use crate::specfun::{self, EpsteinArgs, OperatorZetaArgs, ZetaValue};

#[derive(Debug, Parser)]
#[command(name = "strongtherm", version, about = "Strong-coupling thermodynamics of anharmonic oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Epstein zeta function or the thermal operator zeta function.
    Zeta(ZetaArgs),
    /// Thermodynamics for one method set at one point or over a grid.
    Thermo(RunArgs),
    /// Compare all methods and report pairwise differences.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Series,
    Continued,
    Both,
    Auto,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Derivative in s at s = 0 instead of a value.
    #[arg(long)]
    pub ds0: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub route: RouteArg,
    /// With --omega, evaluate the operator zeta function on the circle of length beta.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// With --ds0 and an operator: use (1-sigma) instead of sqrt(1-sigma) in the sinh.
    #[arg(long)]
    pub printed: bool,
}

/// Run parameters. Every value can also come from `--config`; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat `key = value` file; keys are the long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated inverse temperatures.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    /// power | cosh
    #[arg(long)]
    pub potential: Option<String>,
    /// Comma-separated: strong, weak, free, oracle, all.
    #[arg(long)]
    pub method: Option<String>,
    /// paper | derived | both
    #[arg(long)]
    pub mode: Option<String>,
    /// printed | restored | both
    #[arg(long)]
    pub variant: Option<String>,
    /// Oracle tail tolerance on ln Z.
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub basis_size: Option<String>,
    #[arg(long)]
    pub basis_frequency: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// report | plotdata
    #[arg(long)]
    pub emit: Option<String>,
}

const CONFIG_KEYS: [&str; 15] = [
    "beta",
    "omega",
    "lambda",
    "sigma",
    "p",
    "potential",
    "method",
    "mode",
    "variant",
    "tol",
    "basis_size",
    "basis_frequency",
    "format",
    "output",
    "emit",
];

/// Parses a flat `key = value` config. `#` starts a comment; keys may use
/// `-` or `_`; unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("config line {}: unknown key '{}'", lineno + 1, k.trim())));
        }
        if out.insert(key, v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("config line {}: duplicate key '{}'", lineno + 1, k.trim())));
        }
    }
    Ok(out)
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: SweepGrid,
    pub options: CompareOptions,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub emit: Emit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Report,
    PlotData,
}

struct Defaults {
    method: &'static str,
    mode: &'static str,
    format: &'static str,
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse '{}' as a number", t.trim())))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| Error::Config(format!("{key}: invalid value '{v}'")))
}

fn resolve_methods(method: &str, mode: &str, variant: &str) -> Result<Vec<Method>> {
    let strong: &[Method] = match mode {
        "paper" => &[Method::StrongPaper],
        "derived" => &[Method::StrongDerived],
        "both" => &[Method::StrongPaper, Method::StrongDerived],
        other => return Err(Error::Config(format!("mode: expected paper|derived|both, got '{other}'"))),
    };
    let weak: &[Method] = match variant {
        "printed" => &[Method::WeakPrinted],
        "restored" => &[Method::WeakRestored],
        "both" => &[Method::WeakPrinted, Method::WeakRestored],
        other => return Err(Error::Config(format!("variant: expected printed|restored|both, got '{other}'"))),
    };
    let mut out = Vec::new();
    for name in method.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "strong" => out.extend_from_slice(strong),
            "weak" => out.extend_from_slice(weak),
            "free" => out.push(Method::Free),
            "oracle" => out.push(Method::Oracle),
            "all" => {
                out.extend_from_slice(strong);
                out.extend_from_slice(weak);
                out.extend([Method::Free, Method::Oracle]);
            }
            other => return Err(Error::Config(format!("method: unknown method '{other}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Config(
            "no methods selected; usage: --method strong|weak|free|oracle|all[,...]".into(),
        ));
    }
    Ok(out)
}

impl RunArgs {
    fn flag_values(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("beta", &self.beta),
            ("omega", &self.omega),
            ("lambda", &self.lambda),
            ("sigma", &self.sigma),
            ("p", &self.p),
            ("potential", &self.potential),
            ("method", &self.method),
            ("mode", &self.mode),
            ("variant", &self.variant),
            ("tol", &self.tol),
            ("basis_size", &self.basis_size),
            ("basis_frequency", &self.basis_frequency),
            ("format", &self.format),
            ("output", &self.output),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

fn resolve(args: &RunArgs, emit: Option<&str>, defaults: Defaults) -> Result<RunConfig> {
    let mut kv = match &args.config {
        Some(path) => parse_config(&read_text(path)?)?,
        None => BTreeMap::new(),
    };
    kv.extend(args.flag_values());
    if let Some(e) = emit {
        kv.insert("emit".into(), e.to_string());
    }
    let get = |k: &str, d: &str| kv.get(k).cloned().unwrap_or_else(|| d.to_string());

    let grid = SweepGrid {
        betas: parse_list("beta", &get("beta", "1"))?,
        omegas: parse_list("omega", &get("omega", "1"))?,
        lambdas: parse_list("lambda", &get("lambda", "1"))?,
        sigma: parse_one("sigma", &get("sigma", "0"))?,
        p: parse_one("p", &get("p", "2"))?,
        potential: get("potential", "power").parse::<PotentialKind>()?,
    };
    let methods = resolve_methods(&get("method", defaults.method), &get("mode", defaults.mode), &get("variant", "both"))?;
    let oracle_basis = match (kv.get("basis_size"), kv.get("basis_frequency")) {
        (None, None) => None,
        (Some(n), Some(f)) => Some(BasisSpec::new(parse_one("basis_size", n)?, parse_one("basis_frequency", f)?)?),
        _ => return Err(Error::Config("basis_size and basis_frequency must be given together".into())),
    };
    let options = CompareOptions { methods, oracle_tol: parse_one("tol", &get("tol", "1e-10"))?, oracle_basis };
    let format = match get("format", defaults.format).as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(Error::Config(format!("format: expected csv|json, got '{other}'"))),
    };
    let emit = match get("emit", "report").as_str() {
        "report" => Emit::Report,
        "plotdata" => Emit::PlotData,
        other => return Err(Error::Config(format!("emit: expected report|plotdata, got '{other}'"))),
    };
    Ok(RunConfig { grid, options, format, output: kv.get("output").map(PathBuf::from), emit })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_output(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn render(cfg: &RunConfig, reports: Vec<report::ThermoReport>) -> Result<String> {
    match (cfg.emit, cfg.format) {
        (Emit::PlotData, _) => report::to_plotdata(&reports),
        (Emit::Report, Format::Csv) => report::to_csv(&reports),
        (Emit::Report, Format::Json) => ReportDocument::new(cfg.grid.clone(), cfg.options.clone(), reports).to_json(),
    }
}

/// A flag recorded by the report (`kind: <error display>`), turned back
/// into an error of the matching kind without repeating either prefix.
fn error_from_flag(flag: &str) -> Error {
    let (kind, rest) = flag.split_once(": ").unwrap_or(("domain", flag));
    let strip = |prefix: &str| rest.strip_prefix(prefix).unwrap_or(rest).to_string();
    match kind {
        "no-convergence" => Error::Convergence(strip("convergence failure: ")),
        "out-of-regime" => Error::OutOfRegime(strip("out of regime: ")),
        _ => Error::Domain(strip("domain error: ")),
    }
}

fn cmd_thermo(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = resolve(args, None, Defaults { method: "strong", mode: "paper", format: "csv" })?;
    let reports = report::sweep(&cfg.grid, &cfg.options)?;
    // every requested value must exist
    for r in &reports {
        for m in &r.results {
            if m.values.is_none() {
                let flag = m.flags.first().map(String::as_str).unwrap_or("domain: no value");
                return Err(error_from_flag(&format!(
                    "{flag} [{} at beta={}, omega={}, lambda={}]",
                    m.method.family(),
                    r.beta,
                    r.model.omega,
                    r.model.lambda
                )));
            }
        }
    }
    write_output(&cfg, &render(&cfg, reports)?, out)
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = resolve(&args.run, args.emit.as_deref(), Defaults { method: "all", mode: "both", format: "json" })?;
    let reports = report::sweep(&cfg.grid, &cfg.options)?;
    if reports.iter().all(|r| r.results.iter().all(|m| m.values.is_none())) {
        let flag = reports[0].results[0].flags.first().cloned().unwrap_or_default();
        return Err(error_from_flag(&flag));
    }
    write_output(&cfg, &render(&cfg, reports)?, out)
}

fn zeta_row(label: &str, v: &ZetaValue) -> String {
    format!("{label}\t{:.17e}\t{:.3e}\t{}", v.value, v.abs_error_estimate, v.route)
}

/// Rows of the zeta table. Everything is computed before anything is
/// printed so a failure leaves stdout empty.
fn zeta_rows(a: &ZetaArgs) -> Result<Vec<String>> {
    if !(a.tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {}", a.tol)));
    }
    let operator = match (a.beta, a.omega) {
        (Some(beta), Some(omega)) => Some((beta, omega)),
        (None, None) => None,
        _ => return Err(Error::Config("--beta and --omega must be given together".into())),
    };
    if a.ds0 {
        let (label, value) = match operator {
            Some((beta, omega)) if a.printed => (
                "half_dzeta_D(0)_printed",
                specfun::half_operator_zeta_prime_at_zero_as_printed(beta, omega, a.sigma)?,
            ),
            Some((beta, omega)) => ("half_dzeta_D(0)", specfun::half_operator_zeta_prime_at_zero(beta, omega, a.sigma)?),
            None => {
                let nu = a.nu.ok_or_else(|| Error::Config("--ds0 needs --nu or --beta/--omega".into()))?;
                ("dzeta(0,nu)", specfun::epstein_ds_at_zero(nu)?)
            }
        };
        return Ok(vec![format!("{label}\t{value:.17e}\t0.000e0\tClosedForm")]);
    }
    let s = a.s.ok_or_else(|| Error::Config("missing --s (or use --ds0)".into()))?;
    if let Some((beta, omega)) = operator {
        let v = specfun::operator_zeta(OperatorZetaArgs::new(s, beta, omega, a.sigma)?, a.tol)?;
        return Ok(vec![zeta_row("zeta_D(s)", &v)]);
    }
    let nu = a.nu.ok_or_else(|| Error::Config("missing --nu (or --beta/--omega)".into()))?;
    let args = EpsteinArgs::new(s, nu)?;
    let label = "zeta(s,nu)";
    Ok(match a.route {
        RouteArg::Series => vec![zeta_row(label, &specfun::epstein_series(args, a.tol)?)],
        RouteArg::Continued => vec![zeta_row(label, &specfun::epstein_continued(args, a.tol)?)],
        RouteArg::Auto => {
            let v = if s >= 1.0 { specfun::epstein_series(args, a.tol)? } else { specfun::epstein_continued(args, a.tol)? };
            vec![zeta_row(label, &v)]
        }
        RouteArg::Both => {
            let x = specfun::epstein_series(args, a.tol)?;
            let y = specfun::epstein_continued(args, a.tol)?;
            vec![
                zeta_row(label, &x),
                zeta_row(label, &y),
                format!("difference\t{:.17e}\t-\t-", (x.value - y.value).abs()),
            ]
        }
    })
}

fn cmd_zeta(a: &ZetaArgs, out: &mut dyn Write) -> Result<()> {
    let rows = zeta_rows(a)?;
    writeln!(out, "quantity\tvalue\terror_estimate\troute")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// Runs the program on `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Zeta(a) => cmd_zeta(a, out),
        Command::Thermo(a) => cmd_thermo(a, out),
        Command::Compare(a) => cmd_compare(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "strongtherm: {e}");
            e.exit_code()
        }
    }
}

//! Side-by-side comparison of every method at shared parameter points,
//! parameter sweeps, and their CSV/JSON serializations.
//!
//! A method that does not apply at a point is recorded with a flag rather
//! than aborting the report. Serialized output is deterministic: sweeps
//! may run in parallel but results are assembled in grid order, and
//! numbers are written in shortest round-trip form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OscillatorModel, PotentialKind, ThermalPoint};
use crate::oracle::{self, BasisSpec};
use crate::strongcoupling::{self, CurvatureMode};
use crate::weakcoupling::{self, WeakVariant};

pub const SCHEMA_VERSION: u32 = 1;
/// Floor of the denominator in relative differences.
pub const REL_EPS: f64 = 1e-300;
/// `λ/ω` below this is labelled weak coupling.
pub const WEAK_REGIME_MAX: f64 = 0.1;
/// `λ/ω` above this is labelled strong coupling.
pub const STRONG_REGIME_MIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    StrongPaper,
    StrongDerived,
    WeakPrinted,
    WeakRestored,
    Free,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::StrongPaper,
        Method::StrongDerived,
        Method::WeakPrinted,
        Method::WeakRestored,
        Method::Free,
        Method::Oracle,
    ];

    /// Family name for the `method` CSV column.
    pub fn family(&self) -> &'static str {
        match self {
            Method::StrongPaper | Method::StrongDerived => "strong",
            Method::WeakPrinted | Method::WeakRestored => "weak",
            Method::Free => "free",
            Method::Oracle => "oracle",
        }
    }

    /// Variant name for the `mode` CSV column.
    pub fn mode(&self) -> &'static str {
        match self {
            Method::StrongPaper => CurvatureMode::Published.label(),
            Method::StrongDerived => CurvatureMode::Derived.label(),
            Method::WeakPrinted => WeakVariant::AsPrinted.label(),
            Method::WeakRestored => WeakVariant::OmegaRestored.label(),
            Method::Free | Method::Oracle => "",
        }
    }
}

/// Serializes non-finite floats as strings so that JSON stays valid and
/// round-trips.
mod float_repr {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// `ln Z`, `Z`, `F`, `E` from one method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Values {
    #[serde(rename = "lnZ", with = "float_repr")]
    pub ln_z: f64,
    #[serde(rename = "Z", with = "float_repr")]
    pub z: f64,
    #[serde(rename = "F", with = "float_repr")]
    pub free_energy: f64,
    #[serde(rename = "E", with = "float_repr")]
    pub mean_energy: f64,
}

impl Values {
    /// `Z` and `F` follow from `ln Z` so the identities hold exactly.
    pub fn from_ln_z(ln_z: f64, beta: f64, mean_energy: f64) -> Self {
        Values { ln_z, z: ln_z.exp(), free_energy: -ln_z / beta, mean_energy }
    }

    fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::LnZ => self.ln_z,
            Quantity::F => self.free_energy,
            Quantity::E => self.mean_energy,
        }
    }
}

/// One method's outcome at one point: values, or the reason there are none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    pub values: Option<Values>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "lnZ")]
    LnZ,
    F,
    E,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMetric {
    pub a: Method,
    pub b: Method,
    pub quantity: Quantity,
    #[serde(with = "float_repr")]
    pub abs_diff: f64,
    #[serde(with = "float_repr")]
    pub rel_diff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Weak,
    Intermediate,
    Strong,
}

impl Regime {
    pub fn classify(model: &OscillatorModel) -> Self {
        let r = model.lambda / model.omega;
        if r < WEAK_REGIME_MAX {
            Regime::Weak
        } else if r > STRONG_REGIME_MIN {
            Regime::Strong
        } else {
            Regime::Intermediate
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub model: OscillatorModel,
    pub beta: f64,
    pub regime: Regime,
    pub results: Vec<MethodResult>,
    pub metrics: Vec<PairMetric>,
}

impl ThermoReport {
    pub fn result(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }

    pub fn values(&self, method: Method) -> Option<Values> {
        self.result(method).and_then(|r| r.values)
    }

    pub fn metric(&self, a: Method, b: Method, quantity: Quantity) -> Option<&PairMetric> {
        self.metrics
            .iter()
            .find(|m| m.quantity == quantity && ((m.a == a && m.b == b) || (m.a == b && m.b == a)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub methods: Vec<Method>,
    /// Tail tolerance handed to the oracle.
    pub oracle_tol: f64,
    /// Fixed oracle basis; chosen automatically when absent.
    pub oracle_basis: Option<BasisSpec>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { methods: Method::ALL.to_vec(), oracle_tol: oracle::DEFAULT_TAIL_TOL, oracle_basis: None }
    }
}

impl CompareOptions {
    fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if !(self.oracle_tol > 0.0) {
            return Err(Error::domain(format!("oracle tolerance must be positive, got {}", self.oracle_tol)));
        }
        Ok(())
    }

    /// The requested methods in canonical order, without repeats.
    fn canonical_methods(&self) -> Vec<Method> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

/// Runs one method.
pub fn run_method(model: &OscillatorModel, point: ThermalPoint, method: Method, options: &CompareOptions) -> Result<Values> {
    let beta = point.beta;
    match method {
        Method::StrongPaper | Method::StrongDerived => {
            let mode = if method == Method::StrongPaper { CurvatureMode::Published } else { CurvatureMode::Derived };
            let r = strongcoupling::thermo(model, point, mode)?;
            Ok(Values::from_ln_z(r.ln_z, beta, r.mean_energy))
        }
        Method::WeakPrinted | Method::WeakRestored => {
            let variant = if method == Method::WeakPrinted { WeakVariant::AsPrinted } else { WeakVariant::OmegaRestored };
            let r = weakcoupling::first_order_partition(model, point, variant)?;
            Ok(Values::from_ln_z(r.ln_z, beta, r.mean_energy))
        }
        Method::Free => {
            model.validate()?;
            let ln_z = weakcoupling::free_ln_partition(model.omega, point)?;
            Ok(Values::from_ln_z(ln_z, beta, weakcoupling::free_energy_mean(model.omega, point)?))
        }
        Method::Oracle => {
            let r = match options.oracle_basis {
                Some(b) => oracle::oracle_thermo_with_tol(model, point, b, options.oracle_tol)?,
                None => oracle::oracle_auto(model, point, options.oracle_tol)?,
            };
            Ok(Values::from_ln_z(r.ln_z, beta, r.mean_energy))
        }
    }
}

fn flag_for(e: &Error) -> String {
    let kind = match e {
        Error::OutOfRegime(_) => "out-of-regime",
        Error::Domain(_) | Error::Pole(_) => "domain",
        Error::Convergence(_) => "no-convergence",
        Error::Config(_) | Error::Io(_) => "error",
    };
    format!("{kind}: {e}")
}

fn metrics_for(results: &[MethodResult]) -> Vec<PairMetric> {
    let mut out = Vec::new();
    for (i, ra) in results.iter().enumerate() {
        let Some(va) = ra.values else { continue };
        for rb in &results[i + 1..] {
            let Some(vb) = rb.values else { continue };
            for q in [Quantity::LnZ, Quantity::F, Quantity::E] {
                let (a, b) = (va.get(q), vb.get(q));
                let abs_diff = (a - b).abs();
                let rel_diff = abs_diff / a.abs().max(b.abs()).max(REL_EPS);
                out.push(PairMetric { a: ra.method, b: rb.method, quantity: q, abs_diff, rel_diff });
            }
        }
    }
    out
}

/// Like [`compare`], but a point where every method fails still yields a
/// report (all results flagged), together with the last error.
fn compare_lenient(model: &OscillatorModel, point: ThermalPoint, options: &CompareOptions) -> (ThermoReport, Option<Error>) {
    let mut last_err = None;
    let mut any_ok = false;
    let results: Vec<MethodResult> = options
        .canonical_methods()
        .into_iter()
        .map(|method| match run_method(model, point, method, options) {
            Ok(v) => {
                any_ok = true;
                MethodResult { method, values: Some(v), flags: Vec::new() }
            }
            Err(e) => {
                let r = MethodResult { method, values: None, flags: vec![flag_for(&e)] };
                last_err = Some(e);
                r
            }
        })
        .collect();
    let report = ThermoReport {
        model: *model,
        beta: point.beta,
        regime: Regime::classify(model),
        metrics: metrics_for(&results),
        results,
    };
    (report, if any_ok { None } else { last_err })
}

/// Runs every requested method at one point and records pairwise
/// differences. Method failures become flags; only a point where no
/// method succeeds is an error.
pub fn compare(model: &OscillatorModel, point: ThermalPoint, options: &CompareOptions) -> Result<ThermoReport> {
    options.validate()?;
    model.validate()?;
    ThermalPoint::new(point.beta)?;
    match compare_lenient(model, point, options) {
        (_, Some(e)) => Err(e),
        (r, None) => Ok(r),
    }
}

/// Parameter grid. Points are visited with β outermost and λ innermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub betas: Vec<f64>,
    pub omegas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub sigma: f64,
    pub p: u32,
    pub potential: PotentialKind,
}

impl SweepGrid {
    pub fn quartic(betas: Vec<f64>, omegas: Vec<f64>, lambdas: Vec<f64>) -> Self {
        SweepGrid { betas, omegas, lambdas, sigma: 0.0, p: 2, potential: PotentialKind::Power }
    }

    pub fn len(&self) -> usize {
        self.betas.len() * self.omegas.len() * self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points in grid order, validated.
    pub fn points(&self) -> Result<Vec<(OscillatorModel, ThermalPoint)>> {
        if self.is_empty() {
            return Err(Error::Config("parameter grid is empty".into()));
        }
        let mut out = Vec::with_capacity(self.len());
        for &beta in &self.betas {
            let point = ThermalPoint::new(beta)?;
            for &omega in &self.omegas {
                for &lambda in &self.lambdas {
                    let model = OscillatorModel::new(omega, lambda, self.sigma, self.p)?.with_potential(self.potential)?;
                    out.push((model, point));
                }
            }
        }
        Ok(out)
    }
}

/// Worker threads for sweeps: `STRONGTHERM_THREADS`, where 0 or unset
/// means one per core.
pub fn sweep_threads() -> Result<usize> {
    match std::env::var("STRONGTHERM_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("STRONGTHERM_THREADS must be a non-negative integer, got '{v}'"))),
    }
}

/// One report per grid point, in grid order. Per-point failures are
/// recorded as flags in that point's report.
pub fn sweep(grid: &SweepGrid, options: &CompareOptions) -> Result<Vec<ThermoReport>> {
    sweep_with_threads(grid, options, sweep_threads()?)
}

pub fn sweep_with_threads(grid: &SweepGrid, options: &CompareOptions, threads: usize) -> Result<Vec<ThermoReport>> {
    use rayon::prelude::*;
    options.validate()?;
    let points = grid.points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .map(|(model, point)| compare_lenient(model, *point, options).0)
            .collect()
    }))
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub inputs: DocumentInputs,
    pub results: Vec<ThermoReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentInputs {
    pub grid: SweepGrid,
    pub options: CompareOptions,
}

impl ReportDocument {
    pub fn new(grid: SweepGrid, options: CompareOptions, results: Vec<ThermoReport>) -> Self {
        ReportDocument { schema_version: SCHEMA_VERSION, inputs: DocumentInputs { grid, options }, results }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ReportDocument = serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid report JSON: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema_version {}", doc.schema_version)));
        }
        Ok(doc)
    }
}

/// Fixed CSV header.
pub const CSV_COLUMNS: [&str; 10] = ["beta", "omega", "lambda", "method", "mode", "lnZ", "Z", "F", "E", "flags"];

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One row per (point, method).
pub fn to_csv(reports: &[ThermoReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in reports {
        for m in &r.results {
            let (ln_z, z, f, e) = match m.values {
                Some(v) => (num(v.ln_z), num(v.z), num(v.free_energy), num(v.mean_energy)),
                None => Default::default(),
            };
            w.write_record([
                num(r.beta),
                num(r.model.omega),
                num(r.model.lambda),
                m.method.family().to_string(),
                m.method.mode().to_string(),
                ln_z,
                z,
                f,
                e,
                m.flags.join("; "),
            ])
            .map_err(csv_error)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Plot-ready columns `beta, omega, lambda, lnZ_strong, lnZ_oracle`.
/// The strong-coupling column uses the published mode when present and
/// the derived mode otherwise; missing values are left empty.
pub fn to_plotdata(reports: &[ThermoReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["beta", "omega", "lambda", "lnZ_strong", "lnZ_oracle"]).map_err(csv_error)?;
    for r in reports {
        let strong = r.values(Method::StrongPaper).or_else(|| r.values(Method::StrongDerived));
        let cell = |v: Option<Values>| v.map(|v| num(v.ln_z)).unwrap_or_default();
        w.write_record([
            num(r.beta),
            num(r.model.omega),
            num(r.model.lambda),
            cell(strong),
            cell(r.values(Method::Oracle)),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

//! C ABI for `strongtherm`.
//!
//! Every function returns an `int` status (`ST_OK` on success) and writes
//! results through out-pointers. On failure, `st_last_error_message`
//! describes the most recent error on the calling thread. Panics never
//! cross the boundary; they surface as `ST_ERR_PANIC`.
//!
//! Models are opaque handles created by `st_model_new` and released with
//! `st_model_free`. Strings returned by the library must be released with
//! `st_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use strongtherm::oracle::{self, BasisSpec};
use strongtherm::report::{self, CompareOptions, ReportDocument, SweepGrid};
use strongtherm::specfun::{self, EpsteinArgs, OperatorZetaArgs, ZetaRoute, ZetaValue};
use strongtherm::strongcoupling::{self, CurvatureMode};
use strongtherm::weakcoupling::{self, WeakVariant};
use strongtherm::{Error, OscillatorModel, PotentialKind, ThermalPoint};

pub const ST_OK: c_int = 0;
pub const ST_ERR_NULL: c_int = 1;
pub const ST_ERR_DOMAIN: c_int = 2;
pub const ST_ERR_CONVERGENCE: c_int = 3;
pub const ST_ERR_OUT_OF_REGIME: c_int = 4;
pub const ST_ERR_POLE: c_int = 5;
pub const ST_ERR_CONFIG: c_int = 6;
pub const ST_ERR_IO: c_int = 7;
pub const ST_ERR_PANIC: c_int = 8;

pub const ST_POTENTIAL_POWER: c_int = 0;
pub const ST_POTENTIAL_COSH: c_int = 1;

pub const ST_MODE_PAPER: c_int = 0;
pub const ST_MODE_DERIVED: c_int = 1;

pub const ST_VARIANT_PRINTED: c_int = 0;
pub const ST_VARIANT_RESTORED: c_int = 1;

pub const ST_ROUTE_DIRECT_SERIES: c_int = 0;
pub const ST_ROUTE_INTEGRAL_CONTINUATION: c_int = 1;
pub const ST_ROUTE_CLOSED_FORM: c_int = 2;

/// Opaque oscillator model.
pub struct StModel {
    inner: OscillatorModel,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StZetaValue {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// One of the `ST_ROUTE_*` constants.
    pub route: c_int,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StThermo {
    pub ln_z: f64,
    pub z: f64,
    pub free_energy: f64,
    pub mean_energy: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StOracleThermo {
    pub ln_z: f64,
    pub free_energy: f64,
    pub mean_energy: f64,
    pub truncation_bound: f64,
    pub basis_size: usize,
    pub basis_frequency: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_for(e: &Error) -> c_int {
    match e {
        Error::Domain(_) => ST_ERR_DOMAIN,
        Error::Pole(_) => ST_ERR_POLE,
        Error::Convergence(_) => ST_ERR_CONVERGENCE,
        Error::OutOfRegime(_) => ST_ERR_OUT_OF_REGIME,
        Error::Config(_) => ST_ERR_CONFIG,
        Error::Io(_) => ST_ERR_IO,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ST_OK
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            ST_ERR_NULL
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            code_for(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            ST_ERR_PANIC
        }
    }
}

fn write_out<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and, per the API contract, valid for writes of T
    unsafe { out.write(v) };
    Ok(())
}

fn model_ref<'a>(m: *const StModel) -> Result<&'a OscillatorModel, Failure> {
    // SAFETY: the handle came from st_model_new and has not been freed
    unsafe { m.as_ref() }.map(|m| &m.inner).ok_or(Failure::Null("model"))
}

fn route_code(r: ZetaRoute) -> c_int {
    match r {
        ZetaRoute::DirectSeries => ST_ROUTE_DIRECT_SERIES,
        ZetaRoute::IntegralContinuation => ST_ROUTE_INTEGRAL_CONTINUATION,
        ZetaRoute::ClosedForm => ST_ROUTE_CLOSED_FORM,
    }
}

fn zeta_out(v: ZetaValue) -> StZetaValue {
    StZetaValue { value: v.value, abs_error_estimate: v.abs_error_estimate, route: route_code(v.route) }
}

fn mode_from(mode: c_int) -> Result<CurvatureMode, Failure> {
    match mode {
        ST_MODE_PAPER => Ok(CurvatureMode::Published),
        ST_MODE_DERIVED => Ok(CurvatureMode::Derived),
        other => Err(Error::Config(format!("unknown mode {other}")).into()),
    }
}

/// Message for the most recent failure on this thread; empty after a
/// success. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a power-law model `ω²x²/2 + λx^{2p}/(2p)!`.
#[no_mangle]
pub extern "C" fn st_model_new(omega: f64, lambda: f64, sigma: f64, p: u32, out: *mut *mut StModel) -> c_int {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let inner = OscillatorModel::new(omega, lambda, sigma, p)?;
        write_out(out, Box::into_raw(Box::new(StModel { inner })), "out")
    })
}

/// Switches the interaction shape (`ST_POTENTIAL_*`).
#[no_mangle]
pub extern "C" fn st_model_set_potential(model: *mut StModel, kind: c_int) -> c_int {
    guard(|| {
        // SAFETY: handle from st_model_new, not aliased during the call
        let m = unsafe { model.as_mut() }.ok_or(Failure::Null("model"))?;
        let potential = match kind {
            ST_POTENTIAL_POWER => PotentialKind::Power,
            ST_POTENTIAL_COSH => PotentialKind::Cosh,
            other => return Err(Error::Config(format!("unknown potential {other}")).into()),
        };
        m.inner = m.inner.with_potential(potential)?;
        Ok(())
    })
}

/// Releases a model. Null is ignored.
#[no_mangle]
pub extern "C" fn st_model_free(model: *mut StModel) {
    if !model.is_null() {
        // SAFETY: handle from st_model_new, freed at most once
        drop(unsafe { Box::from_raw(model) });
    }
}

/// `ζ(s, ν)` by the direct lattice sum (s > 1/2).
#[no_mangle]
pub extern "C" fn st_epstein_series(s: f64, nu: f64, tol: f64, out: *mut StZetaValue) -> c_int {
    guard(|| write_out(out, zeta_out(specfun::epstein_series(EpsteinArgs::new(s, nu)?, tol)?), "out"))
}

/// `ζ(s, ν)` by analytic continuation (s < 1).
#[no_mangle]
pub extern "C" fn st_epstein_continued(s: f64, nu: f64, tol: f64, out: *mut StZetaValue) -> c_int {
    guard(|| write_out(out, zeta_out(specfun::epstein_continued(EpsteinArgs::new(s, nu)?, tol)?), "out"))
}

/// `∂ζ(s, ν)/∂s` at s = 0.
#[no_mangle]
pub extern "C" fn st_epstein_ds_at_zero(nu: f64, out: *mut f64) -> c_int {
    guard(|| write_out(out, specfun::epstein_ds_at_zero(nu)?, "out"))
}

/// Zeta function of `-d²/dτ² + (1-σ)ω²` on the circle of length β.
#[no_mangle]
pub extern "C" fn st_operator_zeta(
    s: f64,
    beta: f64,
    omega: f64,
    sigma: f64,
    tol: f64,
    out: *mut StZetaValue,
) -> c_int {
    guard(|| {
        let v = specfun::operator_zeta(OperatorZetaArgs::new(s, beta, omega, sigma)?, tol)?;
        write_out(out, zeta_out(v), "out")
    })
}

/// Leading-order strong-coupling thermodynamics (`ST_MODE_*`).
#[no_mangle]
pub extern "C" fn st_strong_thermo(model: *const StModel, beta: f64, mode: c_int, out: *mut StThermo) -> c_int {
    guard(|| {
        let m = model_ref(model)?;
        let r = strongcoupling::thermo(m, ThermalPoint::new(beta)?, mode_from(mode)?)?;
        write_out(out, StThermo { ln_z: r.ln_z, z: r.z, free_energy: r.free_energy, mean_energy: r.mean_energy }, "out")
    })
}

/// First-order weak-coupling thermodynamics (`ST_VARIANT_*`).
#[no_mangle]
pub extern "C" fn st_weak_thermo(model: *const StModel, beta: f64, variant: c_int, out: *mut StThermo) -> c_int {
    guard(|| {
        let m = model_ref(model)?;
        let variant = match variant {
            ST_VARIANT_PRINTED => WeakVariant::AsPrinted,
            ST_VARIANT_RESTORED => WeakVariant::OmegaRestored,
            other => return Err(Error::Config(format!("unknown variant {other}")).into()),
        };
        let r = weakcoupling::first_order_partition(m, ThermalPoint::new(beta)?, variant)?;
        let v = report::Values::from_ln_z(r.ln_z, beta, r.mean_energy);
        write_out(out, StThermo { ln_z: v.ln_z, z: v.z, free_energy: v.free_energy, mean_energy: v.mean_energy }, "out")
    })
}

/// Exact-diagonalization thermodynamics. `basis_size = 0` chooses the
/// basis automatically and ignores `basis_frequency`.
#[no_mangle]
pub extern "C" fn st_oracle_thermo(
    model: *const StModel,
    beta: f64,
    tol: f64,
    basis_size: usize,
    basis_frequency: f64,
    out: *mut StOracleThermo,
) -> c_int {
    guard(|| {
        let m = model_ref(model)?;
        let point = ThermalPoint::new(beta)?;
        let basis = if basis_size == 0 {
            oracle::choose_basis(m, point, tol)?
        } else {
            BasisSpec::new(basis_size, basis_frequency)?
        };
        let r = oracle::oracle_thermo_with_tol(m, point, basis, tol)?;
        write_out(
            out,
            StOracleThermo {
                ln_z: r.ln_z,
                free_energy: r.free_energy,
                mean_energy: r.mean_energy,
                truncation_bound: r.truncation_bound,
                basis_size: r.basis.size,
                basis_frequency: r.basis.basis_frequency,
            },
            "out",
        )
    })
}

/// Comparison of all methods at one point as a JSON report document.
/// The string must be released with `st_string_free`.
#[no_mangle]
pub extern "C" fn st_compare_json(model: *const StModel, beta: f64, out: *mut *mut c_char) -> c_int {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let m = *model_ref(model)?;
        let options = CompareOptions::default();
        let r = report::compare(&m, ThermalPoint::new(beta)?, &options)?;
        let grid = SweepGrid {
            betas: vec![beta],
            omegas: vec![m.omega],
            lambdas: vec![m.lambda],
            sigma: m.sigma,
            p: m.p,
            potential: m.potential,
        };
        let json = ReportDocument::new(grid, options, vec![r]).to_json()?;
        let c = CString::new(json).map_err(|e| Error::Io(e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// Releases a string returned by the library. Null is ignored.
#[no_mangle]
pub extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in this crate
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Copies the last error message; mainly for tests and bindings that
/// cannot hold on to a borrowed pointer.
pub fn last_error_string() -> String {
    // SAFETY: st_last_error_message always returns a valid C string
    unsafe { CStr::from_ptr(st_last_error_message()) }.to_string_lossy().into_owned()
}

//! Leading-order strong-coupling thermodynamics.
//!
//! The Gaussian part of the Euclidean action is treated as the
//! perturbation around the independent-value generating function
//!
//! `Q(h) = exp[-½ E(h)]`,  `E(h) = ∫ du/|u| (1 - cos hu) exp(-σω²u²/2 - W(u))`
//!
//! for a constant source `h`, where `W` is the anharmonic part of the
//! potential. Expanding `1 - cos` gives `E` as a power series in `h²`
//! whose coefficients follow from `∫_0^∞ u^{ν-1} e^{-μu^q} du =
//! μ^{-ν/q} Γ(ν/q) / q`. At leading order
//!
//! `ln Z = (1/Q) ∂²Q/∂h²|_{h=0} · [½ + ½ ζ'_D(0)]`
//!
//! with the zeta-regularized determinant of `-d²/dτ² + ω²` on the circle
//! of length β supplying `½ ζ'_D(0) = -ln(2 sinh(ωβ/2))`.
//!
//! The curvature `∂²Q/∂h²` at the origin is available in two flavours
//! (see [`CurvatureMode`]): the value obtained by differentiating the
//! series directly, and the published value, which is half of it. Every
//! thermodynamic output therefore exists in both modes and the two differ
//! by exactly a factor of two.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OscillatorModel, PotentialKind, ThermalPoint};
use crate::quadrature::{integrate, QuadOptions, QuadResult};
use crate::specfun::{gamma_real, half_operator_zeta_prime_at_zero, ln_gamma};

/// Which value of `∂²Q/∂h²|_{h=0}` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurvatureMode {
    /// `√(3π/(8λ))` for the quartic, as published.
    #[serde(rename = "paper")]
    Published,
    /// `√(3π/(2λ))`, from differentiating the series for `Q` term by term.
    #[serde(rename = "derived")]
    Derived,
}

impl CurvatureMode {
    pub fn label(&self) -> &'static str {
        match self {
            CurvatureMode::Published => "paper",
            CurvatureMode::Derived => "derived",
        }
    }
}

impl std::str::FromStr for CurvatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "published" => Ok(CurvatureMode::Published),
            "derived" => Ok(CurvatureMode::Derived),
            other => Err(Error::Config(format!("unknown mode '{other}' (expected paper|derived)"))),
        }
    }
}

/// A coefficient of the `h²` power series of `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficient {
    pub k: u32,
    pub value: f64,
}

/// Constant external source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSource {
    pub h: f64,
}

impl ConstantSource {
    pub fn new(h: f64) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::domain(format!("source h must be finite, got {h}")));
        }
        Ok(ConstantSource { h })
    }
}

/// Thermodynamic state from one method. Built from `ln Z` so that
/// `Z = e^{ln Z}` and `F = -ln Z / β` hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoResult {
    pub ln_z: f64,
    pub z: f64,
    pub free_energy: f64,
    pub mean_energy: f64,
    pub mode: CurvatureMode,
}

impl ThermoResult {
    pub fn new(ln_z: f64, beta: f64, mean_energy: f64, mode: CurvatureMode) -> Self {
        ThermoResult { ln_z, z: ln_z.exp(), free_energy: -ln_z / beta, mean_energy, mode }
    }
}

const DIRECT_LIMIT: u32 = 60;

/// `g(k) = ½ (-1)^k / (2k)! · (4!)^{k/2} Γ(k/2)`: the coefficient of
/// `h^{2k} / λ^{k/2}` in `E` for the quartic at σ = 0.
pub fn coefficient_g(k: u32) -> Result<SeriesCoefficient> {
    if k == 0 {
        return Err(Error::domain("series index k must be >= 1"));
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let kf = f64::from(k);
    let magnitude = if k <= DIRECT_LIMIT {
        let fact: f64 = (1..=2 * k).map(f64::from).product();
        0.5 / fact * 24f64.powf(0.5 * kf) * gamma_real(0.5 * kf)
    } else {
        (-(2f64.ln()) - ln_gamma(2.0 * kf + 1.0) + 0.5 * kf * 24f64.ln() + ln_gamma(0.5 * kf)).exp()
    };
    Ok(SeriesCoefficient { k, value: sign * magnitude })
}

/// `k q g(k) g(q)`, the coefficients of the double series in the second
/// derivative of `Q`.
pub fn coefficient_g_pair(k: u32, q: u32) -> Result<f64> {
    Ok(f64::from(k) * f64::from(q) * coefficient_g(k)?.value * coefficient_g(q)?.value)
}

/// Coefficient of `h^{2k}` in `E` for the interaction `λ x^{2p}/(2p)!` at
/// σ = 0:
///
/// `2 (-1)^k/(2k)! · (1/2p) · (λ/(2p)!)^{-k/p} · Γ(k/p)`.
///
/// For p = 2 this is `g(k) λ^{-k/2}`.
pub fn coefficient_g_general(p: u32, k: u32, lambda: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::domain(format!("anharmonic order p must be >= 2, got {p}")));
    }
    if k == 0 {
        return Err(Error::domain("series index k must be >= 1"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    let (pf, kf) = (f64::from(p), f64::from(k));
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let ln_order_fact = ln_gamma(2.0 * pf + 1.0);
    let ln_mag = 2f64.ln() - ln_gamma(2.0 * kf + 1.0) - (2.0 * pf).ln() - kf / pf * (lambda.ln() - ln_order_fact)
        + ln_gamma(kf / pf);
    if p == 2 && k <= DIRECT_LIMIT {
        // keep the quartic bit-compatible with `coefficient_g`
        return Ok(coefficient_g(k)?.value * lambda.powf(-0.5 * kf));
    }
    Ok(sign * ln_mag.exp())
}

/// A partial sum of the `h²` series of `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms included.
    pub terms: u32,
    /// Magnitude of the last included term.
    pub last_term: f64,
    /// Magnitude of the first omitted term, the truncation bound.
    pub first_omitted: f64,
}

fn require_series_path(model: &OscillatorModel) -> Result<()> {
    if model.sigma != 0.0 {
        return Err(Error::OutOfRegime(format!(
            "no closed-form series for sigma = {}; use e_function_quadrature",
            model.sigma
        )));
    }
    if model.potential != PotentialKind::Power {
        return Err(Error::OutOfRegime(
            "no closed-form series for the cosh potential; use e_function_quadrature".into(),
        ));
    }
    if !(model.lambda > 0.0) {
        return Err(Error::domain("the strong-coupling series needs lambda > 0"));
    }
    Ok(())
}

fn series_term(model: &OscillatorModel, k: u32, h2: f64) -> Result<f64> {
    let c = coefficient_g_general(model.p, k, model.lambda)?;
    Ok(if h2 == 0.0 { 0.0 } else { c * h2.powi(k as i32) })
}

/// `Σ_{k=1}^{kmax} c_k h^{2k}` (for the quartic `c_k = g(k)/λ^{k/2}`).
pub fn e_function_series(model: &OscillatorModel, source: ConstantSource, kmax: u32) -> Result<SeriesSum> {
    require_series_path(model)?;
    if kmax == 0 {
        return Err(Error::domain("kmax must be >= 1"));
    }
    let h2 = source.h * source.h;
    let mut value = 0.0;
    let mut last = 0.0;
    for k in 1..=kmax {
        let t = series_term(model, k, h2)?;
        value += t;
        last = t.abs();
    }
    let first_omitted = series_term(model, kmax + 1, h2)?.abs();
    Ok(SeriesSum { value, terms: kmax, last_term: last, first_omitted })
}

/// The series stopped at its smallest term, which becomes the error
/// bound. The coefficients fall off like `Γ(k/p)/(2k)!`, so in practice
/// the sum runs until the terms drop below rounding level.
pub fn e_function_series_optimal(model: &OscillatorModel, source: ConstantSource) -> Result<SeriesSum> {
    require_series_path(model)?;
    const KCAP: u32 = 400;
    let h2 = source.h * source.h;
    let mut terms = Vec::new();
    let mut partial: f64 = 0.0;
    let mut stop = None;
    for k in 1..=KCAP {
        let t = series_term(model, k, h2)?;
        if t.abs() <= f64::EPSILON * partial.abs() || t == 0.0 {
            stop = Some(terms.len());
            terms.push(t);
            break;
        }
        terms.push(t);
        partial += t;
    }
    let cut = stop.unwrap_or_else(|| {
        terms
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    });
    let value: f64 = terms[..cut].iter().sum();
    Ok(SeriesSum {
        value,
        terms: cut as u32,
        last_term: if cut > 0 { terms[cut - 1].abs() } else { 0.0 },
        first_omitted: terms[cut].abs(),
    })
}

/// `∫_{-∞}^{∞} du/|u| (1 - cos hu) e^{-φ(u)}` for an even exponent `φ`
/// that grows without bound. `1 - cos hu` is evaluated as `2 sin²(hu/2)`
/// so the removable singularity at u = 0 costs nothing.
pub fn e_function_quadrature_with<F: Fn(f64) -> f64>(exponent: F, source: ConstantSource) -> Result<QuadResult> {
    let h = source.h;
    if h == 0.0 {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    // cut where e^{-φ} < e^{-60}
    let mut u_max = 1.0;
    while exponent(u_max) < 60.0 {
        u_max *= 2.0;
        if u_max > 1e8 {
            return Err(Error::convergence("integrand weight does not decay; E(h) diverges"));
        }
    }
    let pieces = ((h.abs() * u_max / PI).ceil() as usize).clamp(8, 2000);
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 20_000, initial_pieces: pieces };
    let r = integrate(
        |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let s = (0.5 * h * u).sin();
            2.0 * s * s / u * (-exponent(u)).exp()
        },
        0.0,
        u_max,
        opts,
    )?;
    Ok(QuadResult { value: 2.0 * r.value, abs_error: 2.0 * r.abs_error, intervals: r.intervals })
}

/// `E(ω, σ, λ; h)` by direct quadrature, for any σ in `[0, 1)` and any
/// potential shape.
pub fn e_function_quadrature(model: &OscillatorModel, source: ConstantSource) -> Result<QuadResult> {
    model.validate()?;
    if model.lambda == 0.0 && model.sigma == 0.0 {
        return Err(Error::domain("E(h) diverges for lambda = sigma = 0"));
    }
    let w2 = model.omega * model.omega;
    let sigma = model.sigma;
    e_function_quadrature_with(|u| 0.5 * sigma * w2 * u * u + model.interaction(u), source)
}

/// `Q(h) = exp[-½ Σ_{k≤kmax} c_k h^{2k}]`. The `1/β` prefactor cancels
/// against the Euclidean-time integral for a constant source, so β only
/// enters through validation. `Q(0) = 1` exactly.
pub fn q_independent_value(
    model: &OscillatorModel,
    point: ThermalPoint,
    source: ConstantSource,
    kmax: u32,
) -> Result<f64> {
    ThermalPoint::new(point.beta)?;
    let e = e_function_series(model, source, kmax)?;
    Ok((-0.5 * e.value).exp())
}

/// `∂²Q/∂h²` at h = 0.
///
/// Derived mode: only the k = 1 term survives, giving `-c_1`, which for the
/// quartic is `√(3π/(2λ))`. Published mode: half of that, `√(3π/(8λ))`.
///
/// For σ ≠ 0 or the cosh potential there is no closed form; the
/// derivative is `∫_0^∞ u e^{-σω²u²/2 - W(u)} du`, evaluated by quadrature.
pub fn d2q_dh2_at_zero(model: &OscillatorModel, mode: CurvatureMode) -> Result<f64> {
    model.validate()?;
    if !(model.lambda > 0.0) {
        return Err(Error::domain("strong-coupling forms need lambda > 0"));
    }
    let published = if model.has_closed_form() {
        if model.p == 2 {
            (3.0 * PI / (8.0 * model.lambda)).sqrt()
        } else {
            -0.5 * coefficient_g_general(model.p, 1, model.lambda)?
        }
    } else {
        let w2 = model.omega * model.omega;
        let mut u_max = 1.0;
        while 0.5 * model.sigma * w2 * u_max * u_max + model.interaction(u_max) < 60.0 {
            u_max *= 2.0;
        }
        let opts = QuadOptions::default().with_pieces(16);
        let r = integrate(
            |u: f64| u * (-(0.5 * model.sigma * w2 * u * u + model.interaction(u))).exp(),
            0.0,
            u_max,
            opts,
        )?;
        0.5 * r.value
    };
    Ok(match mode {
        CurvatureMode::Published => published,
        CurvatureMode::Derived => 2.0 * published,
    })
}

fn require_thermo_path(model: &OscillatorModel) -> Result<()> {
    model.validate()?;
    if model.sigma != 0.0 {
        return Err(Error::domain(format!(
            "strong-coupling thermodynamics are evaluated at sigma = 0, got {}",
            model.sigma
        )));
    }
    if !(model.lambda > 0.0) {
        return Err(Error::domain("strong-coupling forms need lambda > 0"));
    }
    Ok(())
}

/// `ln Z = D [½ - ln(2 sinh(ωβ/2))]` with `D = ∂²Q/∂h²|_0` in the chosen
/// mode. The bracket is `½ + ½ζ'_D(0)`, taken with the sign that makes the
/// published closed form come out; the formal cumulant expression carries
/// the opposite overall sign on both pieces.
pub fn ln_partition(model: &OscillatorModel, point: ThermalPoint, mode: CurvatureMode) -> Result<f64> {
    require_thermo_path(model)?;
    let point = ThermalPoint::new(point.beta)?;
    let curvature = d2q_dh2_at_zero(model, mode)?;
    let q0 = 1.0; // Q(h = 0), normalization
    let half_zeta_prime = half_operator_zeta_prime_at_zero(point.beta, model.omega, 0.0)?;
    Ok(curvature / q0 * (0.5 + half_zeta_prime))
}

/// `Z = e^{D/2} / (2 sinh(ωβ/2))^D`.
pub fn partition(model: &OscillatorModel, point: ThermalPoint, mode: CurvatureMode) -> Result<f64> {
    Ok(ln_partition(model, point, mode)?.exp())
}

/// `F = D [-1/(2β) + ω/2 + ln(1 - e^{-βω})/β]`.
pub fn free_energy(model: &OscillatorModel, point: ThermalPoint, mode: CurvatureMode) -> Result<f64> {
    require_thermo_path(model)?;
    let beta = ThermalPoint::new(point.beta)?.beta;
    let d = d2q_dh2_at_zero(model, mode)?;
    let w = model.omega;
    Ok(d * (-0.5 / beta + 0.5 * w + (-(-beta * w).exp_m1()).ln() / beta))
}

/// `E = D [ω/2 + ω/(e^{ωβ} - 1)]`.
pub fn mean_energy(model: &OscillatorModel, point: ThermalPoint, mode: CurvatureMode) -> Result<f64> {
    require_thermo_path(model)?;
    let beta = ThermalPoint::new(point.beta)?.beta;
    let d = d2q_dh2_at_zero(model, mode)?;
    let w = model.omega;
    Ok(d * (0.5 * w + w / (w * beta).exp_m1()))
}

/// All leading-order thermodynamics at one point.
pub fn thermo(model: &OscillatorModel, point: ThermalPoint, mode: CurvatureMode) -> Result<ThermoResult> {
    let ln_z = ln_partition(model, point, mode)?;
    let e = mean_energy(model, point, mode)?;
    Ok(ThermoResult::new(ln_z, point.beta, e, mode))
}

/// Behaviour of the double-series remainder `G(h)` as h → 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GVanishing {
    /// `(h, G(h))` for each requested h.
    pub samples: Vec<(f64, f64)>,
    /// `G(0)`.
    pub at_zero: f64,
    /// Least-squares slope of `ln|G|` against `ln h`.
    pub fitted_exponent: f64,
}

/// Evaluates `G(h) = [Σ_{k,q≤4} k q c_k c_q h^{2k+2q-2}] · exp(-½ Σ_{k≤4} c_k h^{2k})`
/// on a decreasing sequence of h and fits its leading power.
pub fn g_of_h_vanishes(model: &OscillatorModel, h_sequence: &[f64]) -> Result<GVanishing> {
    require_series_path(model)?;
    if h_sequence.len() < 2 {
        return Err(Error::domain("need at least two source values to fit an exponent"));
    }
    if h_sequence.iter().any(|h| !(*h > 0.0)) || h_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("source values must be positive and strictly decreasing"));
    }
    const KMAX: u32 = 4;
    let coefs: Vec<f64> = (1..=KMAX)
        .map(|k| coefficient_g_general(model.p, k, model.lambda))
        .collect::<Result<_>>()?;
    let g = |h: f64| {
        let h2 = h * h;
        let mut double = 0.0;
        for k in 1..=KMAX {
            for q in 1..=KMAX {
                let c = f64::from(k * q) * coefs[k as usize - 1] * coefs[q as usize - 1];
                double += c * h2.powi((k + q - 1) as i32);
            }
        }
        let single: f64 = (1..=KMAX).map(|k| coefs[k as usize - 1] * h2.powi(k as i32)).sum();
        double * (-0.5 * single).exp()
    };
    let samples: Vec<(f64, f64)> = h_sequence.iter().map(|&h| (h, g(h))).collect();
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, v) in &samples {
        let (x, y) = (h.ln(), v.abs().ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(GVanishing { samples, at_zero: g(0.0), fitted_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(lambda: f64) -> OscillatorModel {
        OscillatorModel::quartic(1.0, lambda).unwrap()
    }

    #[test]
    fn g_values() {
        let g1 = coefficient_g(1).unwrap().value;
        assert!((g1 + (1.5 * PI).sqrt()).abs() < 1e-15);
        assert!((g1 + 2.170_803_763_674_803).abs() < 1e-14);
        assert!((coefficient_g(2).unwrap().value - 0.5).abs() < 1e-15);
        assert!((coefficient_g(3).unwrap().value + 0.072_360_125_455_826_77).abs() < 1e-16);
        assert!((coefficient_g(4).unwrap().value - 1.0 / 140.0).abs() < 1e-17);
        assert!(coefficient_g(0).is_err());
    }

    #[test]
    fn g_signs_alternate() {
        for k in 1..=20 {
            let v = coefficient_g(k).unwrap().value;
            assert_eq!(v.signum(), if k % 2 == 0 { 1.0 } else { -1.0 }, "k = {k}");
        }
    }

    #[test]
    fn g_log_space_branch_is_continuous() {
        // the direct and log-space branches meet at DIRECT_LIMIT
        let k = DIRECT_LIMIT + 1;
        let ratio = coefficient_g(k).unwrap().value / coefficient_g(k - 1).unwrap().value;
        let kf = f64::from(k - 1);
        let expect = -24f64.sqrt() * gamma_real(0.5 * (kf + 1.0)) / gamma_real(0.5 * kf)
            / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        assert!((ratio / expect - 1.0).abs() < 1e-11);
        assert!(coefficient_g(500).unwrap().value.is_finite());
    }

    #[test]
    fn general_coefficients() {
        let g1 = coefficient_g(1).unwrap().value;
        assert!((coefficient_g_general(2, 1, 1.0).unwrap() - g1).abs() < 1e-15);
        let g3 = coefficient_g(3).unwrap().value;
        assert!((coefficient_g_general(2, 3, 4.0).unwrap() - g3 / 8.0).abs() < 1e-17);
        // 2 (-1)/2! ∫_0^∞ u e^{-u^6/720} du, by 30-digit quadrature
        let c31 = coefficient_g_general(3, 1, 1.0).unwrap();
        assert!((c31 + 4.001_802_621_724_732).abs() < 1e-13, "{c31}");
        assert!(coefficient_g_general(1, 1, 1.0).is_err());
        assert!(coefficient_g_general(2, 0, 1.0).is_err());
        assert!(coefficient_g_general(2, 1, 0.0).is_err());
    }

    #[test]
    fn general_coefficients_match_quadrature() {
        for (p, k, lambda) in [(3u32, 2u32, 2.0), (4, 1, 0.5), (2, 5, 3.0)] {
            let fact: f64 = (1..=2 * p).map(f64::from).product();
            let kf: f64 = (1..=2 * k).map(f64::from).product();
            let r = integrate(
                |u: f64| u.powi(2 * k as i32 - 1) * (-lambda * u.powi(2 * p as i32) / fact).exp(),
                0.0,
                40.0,
                QuadOptions::default().with_pieces(40),
            )
            .unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let expect = 2.0 * sign / kf * r.value;
            let got = coefficient_g_general(p, k, lambda).unwrap();
            assert!((got / expect - 1.0).abs() < 1e-11, "p={p} k={k}: {got} vs {expect}");
        }
    }

    #[test]
    fn series_basic_properties() {
        let m = quartic(1.0);
        let zero = e_function_series(&m, ConstantSource::new(0.0).unwrap(), 6).unwrap();
        assert_eq!(zero.value, 0.0);

        let h = 0.1;
        let s1 = e_function_series(&m, ConstantSource::new(h).unwrap(), 1).unwrap();
        let s6 = e_function_series(&m, ConstantSource::new(h).unwrap(), 6).unwrap();
        assert!((s1.value - s6.value).abs() <= 0.5 * h.powi(4) * 1.1);

        let sigma = m.with_sigma(0.3).unwrap();
        assert!(matches!(
            e_function_series(&sigma, ConstantSource::new(h).unwrap(), 3),
            Err(Error::OutOfRegime(_))
        ));
    }

    #[test]
    fn series_against_quadrature_reference() {
        // mpmath: 2∫_0^∞ (1 - cos(u/2))/u e^{-2u⁴/24} du = 0.36851536538198468
        let m = quartic(2.0);
        let src = ConstantSource::new(0.5).unwrap();
        let s = e_function_series(&m, src, 8).unwrap();
        let q = e_function_quadrature(&m, src).unwrap();
        assert!((q.value - 0.368_515_365_381_984_68).abs() < 1e-12, "{q:?}");
        assert!((s.value.abs() - q.value).abs() <= s.first_omitted.max(1e-8));
        // the truncated series carries the opposite sign
        assert!(s.value < 0.0);
    }

    #[test]
    fn quadrature_small_h_and_parity() {
        let m = quartic(1.0);
        let e = e_function_quadrature(&m, ConstantSource::new(0.01).unwrap()).unwrap();
        assert!((e.value - 2.170_753_764_398_397e-4).abs() < 1e-15);
        let g1 = coefficient_g(1).unwrap().value;
        assert!((e.value / (g1.abs() * 1e-4) - 1.0).abs() < 1e-4);

        let plus = e_function_quadrature(&m, ConstantSource::new(0.7).unwrap()).unwrap();
        let minus = e_function_quadrature(&m, ConstantSource::new(-0.7).unwrap()).unwrap();
        assert_eq!(plus.value, minus.value);
        assert_eq!(e_function_quadrature(&m, ConstantSource::new(0.0).unwrap()).unwrap().value, 0.0);
    }

    #[test]
    fn quadrature_supports_sigma_and_cosh() {
        let m = OscillatorModel::new(1.0, 2.0, 0.4, 2).unwrap();
        let src = ConstantSource::new(0.3).unwrap();
        let with_sigma = e_function_quadrature(&m, src).unwrap().value;
        let without = e_function_quadrature(&m.with_sigma(0.0).unwrap(), src).unwrap().value;
        assert!(with_sigma > 0.0 && with_sigma < without);

        let c = OscillatorModel::quartic(1.0, 2.0).unwrap().with_potential(PotentialKind::Cosh).unwrap();
        let ec = e_function_quadrature(&c, src).unwrap().value;
        // the cosh interaction dominates the quartic one, so the weight is smaller
        assert!(ec > 0.0 && ec < without);

        let free = OscillatorModel::quartic(1.0, 0.0).unwrap();
        assert!(e_function_quadrature(&free, src).is_err());
        // λ = 0 is fine once σ > 0: E = ∫ du/|u| (1 - cos hu) e^{-σu²/2}
        let gauss = free.with_sigma(0.5).unwrap();
        assert!(e_function_quadrature(&gauss, src).unwrap().value > 0.0);
    }

    #[test]
    fn optimal_truncation_reaches_rounding_level() {
        let m = quartic(1.0);
        let s = e_function_series_optimal(&m, ConstantSource::new(0.5).unwrap()).unwrap();
        assert!(s.first_omitted <= f64::EPSILON * s.value.abs());
        assert!(s.terms >= 5);
        let z = e_function_series_optimal(&m, ConstantSource::new(0.0).unwrap()).unwrap();
        assert_eq!(z.value, 0.0);
        assert_eq!(z.first_omitted, 0.0);
    }

    #[test]
    fn q_values() {
        let m = quartic(10.0);
        let p = ThermalPoint::new(2.0).unwrap();
        assert_eq!(q_independent_value(&m, p, ConstantSource::new(0.0).unwrap(), 5).unwrap(), 1.0);

        let g1 = coefficient_g(1).unwrap().value;
        let g2 = coefficient_g(2).unwrap().value;
        let expect = (-0.5 * (g1 * 0.09 / 10f64.sqrt() + g2 * 0.0081 / 10.0)).exp();
        let got = q_independent_value(&m, p, ConstantSource::new(0.3).unwrap(), 2).unwrap();
        assert!((got - expect).abs() < 1e-15);

        for h in [0.1, 1.0, 3.0] {
            for lambda in [0.1, 1.0, 100.0] {
                let q = q_independent_value(&quartic(lambda), p, ConstantSource::new(h).unwrap(), 2).unwrap();
                assert!(q > 0.0);
            }
        }
    }

    #[test]
    fn curvature_modes() {
        let m = quartic(1.0);
        let paper = d2q_dh2_at_zero(&m, CurvatureMode::Published).unwrap();
        let derived = d2q_dh2_at_zero(&m, CurvatureMode::Derived).unwrap();
        assert!((paper - 1.085_401_881_837_401_5).abs() < 1e-15);
        assert!((derived - 2.170_803_763_674_803).abs() < 1e-14);
        assert_eq!(derived, 2.0 * paper);

        for mode in [CurvatureMode::Published, CurvatureMode::Derived] {
            let a = d2q_dh2_at_zero(&quartic(3.0), mode).unwrap();
            let b = d2q_dh2_at_zero(&quartic(12.0), mode).unwrap();
            assert!((b - a / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn derived_curvature_matches_finite_difference_of_q() {
        let m = quartic(1.0);
        let p = ThermalPoint::new(1.0).unwrap();
        let h = 1e-4;
        let q = |x: f64| q_independent_value(&m, p, ConstantSource::new(x).unwrap(), 10).unwrap();
        let fd = (q(h) - 2.0 * q(0.0) + q(-h)) / (h * h);
        let derived = d2q_dh2_at_zero(&m, CurvatureMode::Derived).unwrap();
        assert!((fd - derived).abs() < 1e-6, "{fd} vs {derived}");
    }

    #[test]
    fn curvature_by_quadrature_agrees_with_closed_form() {
        // σ → 0⁺ via the quadrature path must approach the closed form
        let m = OscillatorModel::new(1.0, 5.0, 1e-12, 2).unwrap();
        let quad = d2q_dh2_at_zero(&m, CurvatureMode::Published).unwrap();
        let closed = d2q_dh2_at_zero(&quartic(5.0), CurvatureMode::Published).unwrap();
        assert!((quad - closed).abs() < 1e-11);
        // general p closed form against the quadrature route
        let p3 = OscillatorModel::new(1.0, 5.0, 0.0, 3).unwrap();
        let p3s = OscillatorModel::new(1.0, 5.0, 1e-12, 3).unwrap();
        let a = d2q_dh2_at_zero(&p3, CurvatureMode::Derived).unwrap();
        let b = d2q_dh2_at_zero(&p3s, CurvatureMode::Derived).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn thermodynamics_reference_point() {
        let m = quartic(1.0);
        let p = ThermalPoint::new(1.0).unwrap();
        let mode = CurvatureMode::Published;
        // 30-digit references
        let ln_z = ln_partition(&m, p, mode).unwrap();
        assert!((ln_z - 0.497_846_865_955_182_4).abs() < 1e-15);
        assert!((partition(&m, p, mode).unwrap() - 1.645_175_171_784_891_2).abs() < 1e-14);
        assert!((free_energy(&m, p, mode).unwrap() + 0.497_846_865_955_182_4).abs() < 1e-15);
        assert!((mean_energy(&m, p, mode).unwrap() - 1.174_379_553_740_201_4).abs() < 1e-14);
    }

    #[test]
    fn bracket_zero_and_limits() {
        // 2 sinh(ωβ/2) = e^{1/2}
        let beta = 2.0 * (0.5f64.exp() / 2.0).asinh();
        let m = quartic(2.0);
        let ln_z = ln_partition(&m, ThermalPoint::new(beta).unwrap(), CurvatureMode::Published).unwrap();
        assert!(ln_z.abs() < 1e-15);

        let huge = quartic(1e30);
        let z = partition(&huge, ThermalPoint::new(1.0).unwrap(), CurvatureMode::Published).unwrap();
        assert!((z - 1.0).abs() < 1e-14);

        let mode = CurvatureMode::Published;
        let d = d2q_dh2_at_zero(&m, mode).unwrap();
        let cold = ThermalPoint::new(200.0).unwrap();
        assert!((free_energy(&m, cold, mode).unwrap() - (d * 0.5 - d * 0.5 / 200.0)).abs() < 1e-12);
        assert!((mean_energy(&m, cold, mode).unwrap() - d * 0.5).abs() < 1e-15);
        let hot = ThermalPoint::new(1e-6).unwrap();
        assert!((mean_energy(&m, hot, mode).unwrap() * 1e-6 / d - 1.0).abs() < 1e-6);
    }

    #[test]
    fn n_oscillator_identification() {
        for n in [1.0f64, 2.0, 5.0] {
            let lambda = 3.0 * PI / (8.0 * n * n);
            let m = quartic(lambda);
            let p = ThermalPoint::new(1.3).unwrap();
            let z = partition(&m, p, CurvatureMode::Published).unwrap();
            let expect = (n / 2.0).exp() * (2.0 * (0.65f64).sinh()).powf(-n);
            assert!((z - expect).abs() < 1e-12, "N = {n}");
        }
    }

    #[test]
    fn thermo_requires_sigma_zero_and_positive_lambda() {
        let p = ThermalPoint::new(1.0).unwrap();
        let s = OscillatorModel::new(1.0, 1.0, 0.2, 2).unwrap();
        assert!(matches!(ln_partition(&s, p, CurvatureMode::Published), Err(Error::Domain(_))));
        assert!(ln_partition(&quartic(0.0), p, CurvatureMode::Published).is_err());
    }

    #[test]
    fn thermo_result_identities() {
        let r = thermo(&quartic(7.0), ThermalPoint::new(0.8).unwrap(), CurvatureMode::Derived).unwrap();
        assert_eq!(r.z, r.ln_z.exp());
        assert_eq!(r.free_energy, -r.ln_z / 0.8);
        assert_eq!(r.mode, CurvatureMode::Derived);
    }

    #[test]
    fn g_remainder_vanishes_quadratically() {
        let m = quartic(1.0);
        let d = g_of_h_vanishes(&m, &[0.1, 0.05, 0.025]).unwrap();
        assert_eq!(d.at_zero, 0.0);
        assert!((d.fitted_exponent - 2.0).abs() < 0.05, "{}", d.fitted_exponent);
        assert!((coefficient_g_pair(1, 1).unwrap() - 1.5 * PI).abs() < 1e-14);
        assert!(g_of_h_vanishes(&m, &[0.1, 0.2]).is_err());
        assert!(g_of_h_vanishes(&m, &[0.1]).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("paper".parse::<CurvatureMode>().unwrap(), CurvatureMode::Published);
        assert_eq!("derived".parse::<CurvatureMode>().unwrap(), CurvatureMode::Derived);
        assert!("both".parse::<CurvatureMode>().is_err());
    }
}

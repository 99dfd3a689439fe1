//! First-order weak-coupling partition function of the quartic oscillator,
//! used as a small-λ cross-check for the strong-coupling results.
//!
//! `Z ≈ Z₀ [1 - (3λ/4!) β ⟨x²⟩²]` with the thermal free-oscillator
//! variance `⟨x²⟩ = coth(βω/2) / (2ω)`.
//!
//! The published bracket drops the `1/ω²` from `⟨x²⟩²`; it is
//! dimensionally consistent only at ω = 1. Both readings are available.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OscillatorModel, PotentialKind, ThermalPoint};

/// Which first-order bracket to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeakVariant {
    /// `1 - (3λ/24) β (1/4) coth²(βω/2)`
    #[serde(rename = "printed")]
    AsPrinted,
    /// `1 - (3λ/24) β coth²(βω/2) / (4ω²)`
    #[serde(rename = "restored")]
    OmegaRestored,
}

impl WeakVariant {
    pub fn label(&self) -> &'static str {
        match self {
            WeakVariant::AsPrinted => "printed",
            WeakVariant::OmegaRestored => "restored",
        }
    }
}

impl std::str::FromStr for WeakVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(WeakVariant::AsPrinted),
            "restored" => Ok(WeakVariant::OmegaRestored),
            other => Err(Error::Config(format!("unknown weak-coupling variant '{other}' (expected printed|restored)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingResult {
    pub z: f64,
    pub ln_z: f64,
    pub mean_energy: f64,
    /// The first-order bracket multiplying `Z₀`; always positive.
    pub bracket: f64,
    pub variant: WeakVariant,
}

/// `Z₀ = 1 / (2 sinh(βω/2))`.
pub fn free_partition(omega: f64, point: ThermalPoint) -> Result<f64> {
    Ok(free_ln_partition(omega, point)?.exp())
}

/// `ln Z₀`, finite even where `Z₀` itself would underflow.
pub fn free_ln_partition(omega: f64, point: ThermalPoint) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    let beta = ThermalPoint::new(point.beta)?.beta;
    Ok(-crate::specfun::ln_two_sinh(0.5 * beta * omega))
}

/// `E₀ = (ω/2) coth(βω/2)`.
pub fn free_energy_mean(omega: f64, point: ThermalPoint) -> Result<f64> {
    free_ln_partition(omega, point)?;
    Ok(0.5 * omega / (0.5 * point.beta * omega).tanh())
}

fn require_quartic(model: &OscillatorModel) -> Result<()> {
    model.validate()?;
    if model.p != 2 || model.potential != PotentialKind::Power || model.sigma != 0.0 {
        return Err(Error::OutOfRegime(
            "the weak-coupling bracket is only available for the quartic at sigma = 0".into(),
        ));
    }
    Ok(())
}

/// Coefficient `c` in the bracket `1 - c β coth²(βω/2)`.
fn bracket_coefficient(model: &OscillatorModel, variant: WeakVariant) -> f64 {
    let c = 3.0 * model.lambda / 24.0 / 4.0;
    match variant {
        WeakVariant::AsPrinted => c,
        WeakVariant::OmegaRestored => c / (model.omega * model.omega),
    }
}

/// `Z₀ · [1 - c β coth²(βω/2)]`, with `E = -∂ ln Z / ∂β` evaluated
/// analytically. Fails with `OutOfRegime` once the bracket is no longer
/// positive, which is where first order stops making sense.
pub fn first_order_partition(
    model: &OscillatorModel,
    point: ThermalPoint,
    variant: WeakVariant,
) -> Result<WeakCouplingResult> {
    require_quartic(model)?;
    let beta = ThermalPoint::new(point.beta)?.beta;
    let w = model.omega;
    let x = 0.5 * beta * w;
    let coth = 1.0 / x.tanh();
    let coth2 = coth * coth;
    let c = bracket_coefficient(model, variant);
    let bracket = 1.0 - c * beta * coth2;
    if !(bracket > 0.0) {
        return Err(Error::OutOfRegime(format!(
            "first-order bracket is {bracket:.6e} <= 0 at lambda = {}, beta = {beta}",
            model.lambda
        )));
    }
    let ln_z = free_ln_partition(w, point)? + bracket.ln();
    let csch2 = 1.0 / (x.sinh() * x.sinh());
    let e0 = 0.5 * w * coth;
    let mean_energy = e0 + c * (coth2 - beta * w * coth * csch2) / bracket;
    Ok(WeakCouplingResult { z: ln_z.exp(), ln_z, mean_energy, bracket, variant })
}

/// `d ln Z / dλ` at λ = 0: `-β coth²(βω/2) / 32` times `1/ω²` when the
/// dimension is restored.
pub fn ln_z_slope_at_zero(omega: f64, point: ThermalPoint, variant: WeakVariant) -> Result<f64> {
    let model = OscillatorModel::quartic(omega, 1.0)?;
    let beta = ThermalPoint::new(point.beta)?.beta;
    let coth = 1.0 / (0.5 * beta * omega).tanh();
    Ok(-bracket_coefficient(&model, variant) * beta * coth * coth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(beta: f64) -> ThermalPoint {
        ThermalPoint::new(beta).unwrap()
    }

    #[test]
    fn free_values() {
        let z = free_partition(1.0, pt(1.0)).unwrap();
        assert!((z - 0.959_517_375_667_471_9).abs() < 1e-15);
        assert!((free_energy_mean(2.0, pt(1e3)).unwrap() - 1.0).abs() < 1e-15);
        // deep cold: ln Z₀ ≈ -βω/2 without underflow
        assert!((free_ln_partition(1.0, pt(4000.0)).unwrap() + 2000.0).abs() < 1e-12);
        assert!(free_partition(0.0, pt(1.0)).is_err());
    }

    #[test]
    fn lambda_zero_is_free() {
        for variant in [WeakVariant::AsPrinted, WeakVariant::OmegaRestored] {
            let r = first_order_partition(&OscillatorModel::quartic(1.7, 0.0).unwrap(), pt(0.9), variant).unwrap();
            assert_eq!(r.z, free_partition(1.7, pt(0.9)).unwrap());
            assert_eq!(r.bracket, 1.0);
            assert!((r.mean_energy - free_energy_mean(1.7, pt(0.9)).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn variants_coincide_at_unit_omega() {
        let m = OscillatorModel::quartic(1.0, 0.05).unwrap();
        let a = first_order_partition(&m, pt(1.0), WeakVariant::AsPrinted).unwrap();
        let b = first_order_partition(&m, pt(1.0), WeakVariant::OmegaRestored).unwrap();
        assert_eq!(a.z, b.z);
        let m2 = OscillatorModel::quartic(2.0, 0.05).unwrap();
        let a = first_order_partition(&m2, pt(1.0), WeakVariant::AsPrinted).unwrap();
        let b = first_order_partition(&m2, pt(1.0), WeakVariant::OmegaRestored).unwrap();
        assert!(a.z < b.z);
    }

    #[test]
    fn slope_matches_finite_difference() {
        for variant in [WeakVariant::AsPrinted, WeakVariant::OmegaRestored] {
            let slope = ln_z_slope_at_zero(1.5, pt(0.7), variant).unwrap();
            let d = 1e-6;
            let lz = |l: f64| {
                first_order_partition(&OscillatorModel::quartic(1.5, l).unwrap(), pt(0.7), variant).unwrap().ln_z
            };
            let fd = (lz(d) - lz(0.0)) / d;
            assert!((fd - slope).abs() < 1e-5 * slope.abs(), "{fd} vs {slope}");
        }
    }

    #[test]
    fn energy_is_minus_beta_derivative() {
        let m = OscillatorModel::quartic(1.3, 0.2).unwrap();
        for variant in [WeakVariant::AsPrinted, WeakVariant::OmegaRestored] {
            let beta = 1.1;
            let h = 1e-5;
            let lz = |b: f64| first_order_partition(&m, pt(b), variant).unwrap().ln_z;
            let fd = -(lz(beta + h) - lz(beta - h)) / (2.0 * h);
            let e = first_order_partition(&m, pt(beta), variant).unwrap().mean_energy;
            assert!((fd - e).abs() < 1e-8, "{fd} vs {e}");
        }
    }

    #[test]
    fn bracket_breakdown_is_an_error() {
        let m = OscillatorModel::quartic(1.0, 50.0).unwrap();
        assert!(matches!(
            first_order_partition(&m, pt(2.0), WeakVariant::AsPrinted),
            Err(Error::OutOfRegime(_))
        ));
    }

    #[test]
    fn rejects_non_quartic() {
        let m = OscillatorModel::new(1.0, 0.1, 0.0, 3).unwrap();
        assert!(first_order_partition(&m, pt(1.0), WeakVariant::OmegaRestored).is_err());
    }
}

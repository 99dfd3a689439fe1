//! Physical parameters shared by every method: the oscillator and the
//! thermal point. Units have ħ = m = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the potential beyond the harmonic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    /// `ω²x²/2 + λ x^{2p} / (2p)!`
    Power,
    /// `(ω⁴/λ) [cosh(√λ x / ω) - 1]`, whose Taylor series starts with the
    /// quartic oscillator.
    Cosh,
}

impl std::str::FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" | "polynomial" | "quartic" => Ok(PotentialKind::Power),
            "cosh" => Ok(PotentialKind::Cosh),
            other => Err(Error::Config(format!("unknown potential '{other}' (expected power|cosh)"))),
        }
    }
}

/// An anharmonic oscillator `H = p²/2 + V(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorModel {
    pub omega: f64,
    pub lambda: f64,
    /// Fraction of `ω²` moved from the Gaussian kernel into the
    /// independent-value functional.
    pub sigma: f64,
    /// Anharmonic order: the interaction is `λ x^{2p} / (2p)!`.
    pub p: u32,
    pub potential: PotentialKind,
}

impl OscillatorModel {
    /// Quartic oscillator `ω²x²/2 + λx⁴/4!` with σ = 0.
    pub fn quartic(omega: f64, lambda: f64) -> Result<Self> {
        Self::new(omega, lambda, 0.0, 2)
    }

    pub fn new(omega: f64, lambda: f64, sigma: f64, p: u32) -> Result<Self> {
        let m = OscillatorModel { omega, lambda, sigma, p, potential: PotentialKind::Power };
        m.validate()?;
        Ok(m)
    }

    pub fn with_potential(mut self, potential: PotentialKind) -> Result<Self> {
        self.potential = potential;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::domain(format!("omega must be positive, got {}", self.omega)));
        }
        // λ = 0 is the free oscillator; methods that need λ > 0 check it themselves.
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be non-negative, got {}", self.lambda)));
        }
        if !(0.0..1.0).contains(&self.sigma) {
            return Err(Error::domain(format!("sigma must lie in [0, 1), got {}", self.sigma)));
        }
        if self.p < 2 {
            return Err(Error::domain(format!("anharmonic order p must be >= 2, got {}", self.p)));
        }
        if self.potential == PotentialKind::Cosh && self.lambda == 0.0 {
            return Err(Error::domain("the cosh potential needs lambda > 0"));
        }
        Ok(())
    }

    /// `(2p)!` as a float.
    pub fn order_factorial(&self) -> f64 {
        (1..=2 * self.p).map(f64::from).product()
    }

    /// The anharmonic part `V(x) - ω²x²/2`.
    pub fn interaction(&self, x: f64) -> f64 {
        match self.potential {
            PotentialKind::Power => self.lambda * x.powi(2 * self.p as i32) / self.order_factorial(),
            PotentialKind::Cosh => {
                let w2 = self.omega * self.omega;
                let a = self.lambda.sqrt() * x / self.omega;
                // cosh(a) - 1 - a²/2 without cancellation for small a
                let rest = if a.abs() < 0.1 {
                    let a2 = a * a;
                    a2 * a2 / 24.0 * (1.0 + a2 / 30.0 * (1.0 + a2 / 56.0 * (1.0 + a2 / 90.0)))
                } else {
                    a.cosh() - 1.0 - 0.5 * a * a
                };
                w2 * w2 / self.lambda * rest
            }
        }
    }

    /// The full potential `V(x)`.
    pub fn potential_at(&self, x: f64) -> f64 {
        0.5 * self.omega * self.omega * x * x + self.interaction(x)
    }

    /// Whether the closed forms of the strong-coupling expansion apply.
    pub fn has_closed_form(&self) -> bool {
        self.sigma == 0.0 && self.potential == PotentialKind::Power
    }
}

/// Inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub beta: f64,
}

impl ThermalPoint {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        Ok(ThermalPoint { beta })
    }
}

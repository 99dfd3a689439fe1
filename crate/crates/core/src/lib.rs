//! Thermodynamics of anharmonic oscillators at strong coupling.
//!
//! The leading-order strong-coupling closed forms live in
//! [`strongcoupling`]; they rest on the Epstein zeta machinery in
//! [`specfun`]. Two independent references check them: first-order
//! weak-coupling results ([`weakcoupling`]) and exact diagonalization in a
//! harmonic-oscillator basis ([`oracle`]). [`report`] puts the methods
//! side by side and [`cli`] drives everything from the command line.
//!
//! Units have ħ = m = 1 throughout.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod strongcoupling;
pub mod weakcoupling;

pub use error::{Error, Result};
pub use model::{OscillatorModel, PotentialKind, ThermalPoint};
pub use report::{CompareOptions, Method, ThermoReport};
pub use strongcoupling::{CurvatureMode, ThermoResult};
pub use weakcoupling::WeakVariant;

//! Casimir interaction carried by eddy (Foucault) current modes between two
//! metallic half-spaces, together with a Lifshitz-theory reference for
//! Drude, plasma and perfectly reflecting mirrors.
//!
//! All library functions work in a dimensionless unit system:
//! `ħ = c = k_B = 1`, frequencies in units of the plasma frequency Ω,
//! lengths in units of the penetration depth λ = c/Ω, temperatures in
//! units of ħΩ/k_B and energies per area in units of ħΩ/λ². In these units
//! the electromagnetic diffusion constant equals the scattering rate.
//! Conversion to SI lives in [`units::SiScale`] and is only used by the CLI.
//!
//! Sign conventions: pressures are reported as `∂F/∂L`, so a positive value
//! is attractive and eddy-current pressures come out negative (repulsive).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod density;
pub mod figures;
pub mod lifshitz;
pub mod numerics;
pub mod response;
pub mod thermo;
pub mod units;
pub mod validation;

pub use numerics::{QuadResult, QuadratureSpec};
pub use units::{MaterialModel, ModelKind};

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dielectric function evaluated at its pole (omega = {0})")]
    Pole(String),
    #[error("{0} is not defined for the plasma model")]
    NotApplicable(&'static str),
    #[error("square root evaluated at a branch point (k = {k}, xi = {xi})")]
    BranchPoint { k: f64, xi: f64 },
    #[error("xi = {xi} lies outside the eddy-current cut ({lower}, {upper})")]
    OffCut { xi: f64, lower: f64, upper: f64 },
    #[error("root finding did not converge (relative residual {residual:e})")]
    RootFinding { residual: f64 },
    #[error("{what} did not converge: estimated error {error:e} for value {value:e}")]
    Quadrature {
        what: &'static str,
        value: f64,
        error: f64,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Turn a quadrature outcome into a value, or a typed error carrying the
/// achieved tolerance.
pub(crate) fn checked(what: &'static str, r: QuadResult) -> Result<f64> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::Quadrature {
            what,
            value: r.value,
            error: r.error_estimate,
        })
    }
}

//! Material models, the dimensionless unit system and SI conversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which dielectric description a mirror uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Drude,
    Plasma,
}

/// Power-law temperature dependence `γ(T) = γ₀ (T/T₀)ⁿ` of the scattering
/// rate ("perfect crystal" scenario).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateLaw {
    pub exponent: u32,
    pub gamma_ref: f64,
    pub t_ref: f64,
}

/// Local dielectric model of a metallic half-space.
///
/// The plasma frequency is the unit of frequency and is therefore fixed to 1.
/// `gamma` is γ/Ω; it is zero for the plasma model. When a [`RateLaw`] is
/// present, `gamma` equals its reference value `γ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    kind: ModelKind,
    gamma: f64,
    rate_law: Option<RateLaw>,
}

impl MaterialModel {
    pub fn drude(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Drude scattering rate must be positive, got {gamma}"
            )));
        }
        if gamma >= 1.0 {
            // The eddy branch cut analysis assumes a single real root of the
            // branch-point cubic inside (0, γ); keep to good conductors.
            return Err(Error::InvalidParameter(format!(
                "scattering rate gamma/Omega = {gamma} is not a good conductor (need < 1)"
            )));
        }
        Ok(Self {
            kind: ModelKind::Drude,
            gamma,
            rate_law: None,
        })
    }

    pub fn plasma() -> Self {
        Self {
            kind: ModelKind::Plasma,
            gamma: 0.0,
            rate_law: None,
        }
    }

    /// Drude metal whose scattering rate scales as `γ₀ (T/T₀)ⁿ`, `n ≥ 2`.
    pub fn perfect_crystal(gamma_ref: f64, t_ref: f64, exponent: u32) -> Result<Self> {
        if exponent < 2 {
            return Err(Error::InvalidParameter(format!(
                "rate exponent must be >= 2, got {exponent}"
            )));
        }
        if !(t_ref > 0.0 && t_ref.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reference temperature must be positive, got {t_ref}"
            )));
        }
        let base = Self::drude(gamma_ref)?;
        Ok(Self {
            rate_law: Some(RateLaw {
                exponent,
                gamma_ref,
                t_ref,
            }),
            ..base
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rate_law(&self) -> Option<RateLaw> {
        self.rate_law
    }

    pub fn is_drude(&self) -> bool {
        self.kind == ModelKind::Drude
    }

    /// Scattering rate at temperature `t`.
    pub fn scattering_rate_at(&self, t: f64) -> f64 {
        match self.rate_law {
            None => self.gamma,
            Some(law) => law.gamma_ref * (t / law.t_ref).powi(law.exponent as i32),
        }
    }

    /// Freeze the rate law at temperature `t`, giving a fixed-γ model.
    pub fn at_temperature(&self, t: f64) -> Result<Self> {
        match self.kind {
            ModelKind::Plasma => Ok(*self),
            ModelKind::Drude => {
                let gamma = self.scattering_rate_at(t);
                if !(gamma > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "scattering rate vanishes at T = {t}"
                    )));
                }
                Ok(Self {
                    kind: ModelKind::Drude,
                    gamma,
                    rate_law: None,
                })
            }
        }
    }

    /// Same model with a different (fixed) scattering rate.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::drude(gamma)
    }

    pub(crate) fn require_drude(&self, what: &'static str) -> Result<f64> {
        match self.kind {
            ModelKind::Drude => Ok(self.gamma),
            ModelKind::Plasma => Err(Error::NotApplicable(what)),
        }
    }
}

/// Dielectric function `ε(ω) = 1 - 1/[ω(ω + iγ)]` (plasma: `1 - 1/ω²`).
pub fn drude_epsilon(omega: Complex64, m: &MaterialModel) -> Result<Complex64> {
    let denom = omega * (omega + Complex64::new(0.0, m.gamma));
    if denom.norm() == 0.0 {
        return Err(Error::Pole(format!("{omega}")));
    }
    Ok(1.0 - denom.inv())
}

/// `ω² ε(ω)`, finite at ω = 0 and free of the cancellation in `ω² - ω²/(…)`.
pub(crate) fn omega2_epsilon(omega: Complex64, m: &MaterialModel) -> Complex64 {
    match m.kind {
        ModelKind::Plasma => omega * omega - 1.0,
        ModelKind::Drude => omega * omega - omega / (omega + Complex64::new(0.0, m.gamma)),
    }
}

/// Electromagnetic diffusion constant `D = γλ²`, equal to γ in internal units.
pub fn diffusion_coefficient(m: &MaterialModel) -> Result<f64> {
    m.require_drude("diffusion coefficient")
}

/// Thouless frequency `ξ_L = D / L²`.
pub fn thouless_frequency(m: &MaterialModel, l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "separation must be positive, got {l}"
        )));
    }
    Ok(diffusion_coefficient(m)? / (l * l))
}

pub fn scattering_rate_at(m: &MaterialModel, t: f64) -> f64 {
    m.scattering_rate_at(t)
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Conversion between internal units and SI, fixed by the plasma
/// penetration depth λ = c/Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiScale {
    pub penetration_depth: f64,
}

impl SiScale {
    pub fn new(penetration_depth: f64) -> Result<Self> {
        if !(penetration_depth > 0.0) {
            return Err(Error::InvalidParameter(
                "penetration depth must be positive".into(),
            ));
        }
        Ok(Self { penetration_depth })
    }

    /// Gold, λ ≈ 20 nm.
    pub fn gold() -> Self {
        Self {
            penetration_depth: 20e-9,
        }
    }

    /// Plasma frequency Ω in rad/s.
    pub fn plasma_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / self.penetration_depth
    }

    /// ħΩ/k_B in kelvin: the unit of temperature and of frequency-as-energy.
    pub fn kelvin_per_unit(&self) -> f64 {
        HBAR * self.plasma_frequency() / BOLTZMANN
    }

    pub fn length_to_internal(&self, metres: f64) -> f64 {
        metres / self.penetration_depth
    }

    pub fn length_to_si(&self, l: f64) -> f64 {
        l * self.penetration_depth
    }

    pub fn kelvin_to_internal(&self, kelvin: f64) -> f64 {
        kelvin / self.kelvin_per_unit()
    }

    pub fn to_kelvin(&self, energy: f64) -> f64 {
        energy * self.kelvin_per_unit()
    }

    /// Energy per area: unit ħΩ/λ² in J/m².
    pub fn energy_density_to_si(&self, e: f64) -> f64 {
        e * HBAR * self.plasma_frequency() / self.penetration_depth.powi(2)
    }

    /// Pressure: unit ħΩ/λ³ in Pa.
    pub fn pressure_to_si(&self, p: f64) -> f64 {
        p * HBAR * self.plasma_frequency() / self.penetration_depth.powi(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drude() -> MaterialModel {
        MaterialModel::drude(0.08).unwrap()
    }

    #[test]
    fn epsilon_on_imaginary_axis() {
        let eps = drude_epsilon(Complex64::new(0.0, 1.0), &drude()).unwrap();
        assert!((eps.re - (1.0 + 1.0 / 1.08)).abs() < 1e-15);
        assert!(eps.im.abs() < 1e-15);
    }

    #[test]
    fn plasma_epsilon() {
        let eps = drude_epsilon(Complex64::new(2.0, 0.0), &MaterialModel::plasma()).unwrap();
        assert!((eps - Complex64::new(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn epsilon_matches_rational_form() {
        // ε = 1 - 1/(ω² + iγω) written out in real arithmetic.
        let (w, g) = (0.5, 0.08);
        let den_re = w * w;
        let den_im = g * w;
        let mag = den_re * den_re + den_im * den_im;
        let expected = Complex64::new(1.0 - den_re / mag, den_im / mag);
        let eps = drude_epsilon(Complex64::new(w, 0.0), &drude()).unwrap();
        assert!((eps - expected).norm() < 1e-14 * expected.norm());
    }

    #[test]
    fn poles_are_errors() {
        let m = drude();
        assert!(drude_epsilon(Complex64::new(0.0, 0.0), &m).is_err());
        assert!(drude_epsilon(Complex64::new(0.0, -0.08), &m).is_err());
    }

    #[test]
    fn diffusion_and_thouless() {
        assert_eq!(diffusion_coefficient(&drude()).unwrap(), 0.08);
        let m = MaterialModel::drude(1e-3).unwrap();
        assert_eq!(diffusion_coefficient(&m).unwrap(), 1e-3);
        assert!((thouless_frequency(&drude(), 1.0).unwrap() - 0.08).abs() < 1e-17);
        assert!((thouless_frequency(&drude(), 2.0).unwrap() - 0.02).abs() < 1e-17);
        assert!(diffusion_coefficient(&MaterialModel::plasma()).is_err());
        assert!(thouless_frequency(&drude(), 0.0).is_err());
    }

    #[test]
    fn rate_law() {
        let m = MaterialModel::perfect_crystal(0.08, 0.01, 2).unwrap();
        assert_eq!(m.scattering_rate_at(0.01), 0.08);
        assert!((m.scattering_rate_at(0.005) - 0.02).abs() < 1e-17);
        assert_eq!(drude().scattering_rate_at(123.0), 0.08);
        assert!(MaterialModel::perfect_crystal(0.08, 0.01, 1).is_err());
    }

    #[test]
    fn gold_thouless_energy_order_of_magnitude() {
        let si = SiScale::gold();
        let gamma = si.kelvin_to_internal(500.0);
        let m = MaterialModel::drude(gamma).unwrap();
        let l = si.length_to_internal(100e-9);
        let xi_l = si.to_kelvin(thouless_frequency(&m, l).unwrap());
        assert!((xi_l / 20.0 - 1.0).abs() < 0.3, "ħξ_L = {xi_l} K");
    }

    #[test]
    fn plasma_limit_of_drude() {
        let w = Complex64::new(0.7, 0.0);
        let plasma = drude_epsilon(w, &MaterialModel::plasma()).unwrap();
        let mut prev = f64::INFINITY;
        for g in [1e-2, 1e-4, 1e-6] {
            let d = (drude_epsilon(w, &MaterialModel::drude(g).unwrap()).unwrap() - plasma).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn low_frequency_product_vanishes() {
        let m = drude();
        let small = omega2_epsilon(Complex64::new(1e-8, 0.0), &m).norm();
        assert!(small < 1e-6);
    }
}

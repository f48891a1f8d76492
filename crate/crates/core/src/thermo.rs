//! Thermodynamics of the eddy-current continuum.
//!
//! Every quantity here is a functional `∫₀^γ ρ̃(ξ; L) K(ξ) dξ` of the cut
//! density, one kernel per quantity:
//!
//! | quantity            | kernel K(ξ)                              |
//! |---------------------|------------------------------------------|
//! | zero-point energy   | `-(ξ/2π) ln(ξ/Λ)`                        |
//! | thermal free energy | `-T binet(ξ/2πT)`                        |
//! | entropy             | `binet(x) - x binet'(x)`, `x = ξ/2πT`    |
//!
//! The thermal kernels are the real-frequency free energy and entropy per
//! oscillator averaged over the Lorentzian `ξ/(π(ξ² + ω²))`, done in closed
//! form (see [`crate::numerics::special`]). All functionals are evaluated by
//! parts as `∫ G K' dξ` on the integrated phase G, and pressures replace G
//! by `∂G/∂L`. Pressures are `∂F/∂L`: positive is attractive.

use std::f64::consts::PI;
use std::fmt;

use crate::density::integrate_phase_weighted;
use crate::numerics::special::{binet_d1, binet_d2, ZETA3};
use crate::numerics::QuadratureSpec;
use crate::units::MaterialModel;
use crate::{Error, Result};

/// Which thermodynamic quantity a [`ThermoResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Energy,
    Pressure,
    FreeEnergy,
    Entropy,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Energy => "energy",
            Quantity::Pressure => "pressure",
            Quantity::FreeEnergy => "free_energy",
            Quantity::Entropy => "entropy",
        })
    }
}

/// One value per unit area, with the parameters it was computed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoResult {
    pub quantity: Quantity,
    pub value: f64,
    pub separation: f64,
    pub temperature: f64,
    pub gamma: f64,
    /// Zero-point cutoff Λ; `None` for cutoff-free quantities.
    pub cutoff: Option<f64>,
    /// Perfect-reflector reference value, when one exists.
    pub normalization: Option<f64>,
}

impl ThermoResult {
    pub const CSV_HEADER: &'static str = "L,T,gamma,Lambda,quantity,value,normalization";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        format!(
            "{:.16e},{:.16e},{:.16e},{},{},{:.16e},{}",
            self.separation,
            self.temperature,
            self.gamma,
            opt(self.cutoff),
            self.quantity,
            self.value,
            opt(self.normalization)
        )
    }
}

/// The default zero-point cutoff, `Λ = 5γ`.
pub fn default_cutoff(m: &MaterialModel) -> f64 {
    5.0 * m.gamma()
}

/// Zero-point energy `-(ξ/2π) ln(ξ/Λ)` of an overdamped mode at `ω = -iξ`.
pub fn zero_point_energy_mode(xi: f64, cutoff: f64) -> Result<f64> {
    if !(xi > 0.0 && cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need xi > 0 and cutoff > 0, got {xi}, {cutoff}"
        )));
    }
    Ok(-(xi / (2.0 * PI)) * (xi / cutoff).ln())
}

/// ξ-derivative of the zero-point kernel.
fn zero_point_slope(xi: f64, cutoff: f64) -> f64 {
    -((xi / cutoff).ln() + 1.0) / (2.0 * PI)
}

fn validate(l: f64, t: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "separation must be positive, got {l}"
        )));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be non-negative, got {t}"
        )));
    }
    Ok(())
}

fn validate_cutoff(cutoff: f64, gamma: f64) -> Result<()> {
    if !(cutoff >= gamma && cutoff.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cutoff {cutoff} must be at least gamma = {gamma}"
        )));
    }
    Ok(())
}

fn perfect_reflector_energy(l: f64) -> f64 {
    -PI.powi(2) / (1440.0 * l.powi(3))
}

fn perfect_reflector_pressure(l: f64) -> f64 {
    PI.powi(2) / (480.0 * l.powi(4))
}

/// Eddy-current Casimir energy at `T = 0`,
/// `E = ∫ ρ̃(ξ; L) [-(ξ/2π) ln(ξ/Λ)] dξ`.
pub fn casimir_energy_t0(
    l: f64,
    m: &MaterialModel,
    cutoff: f64,
    quad: &QuadratureSpec,
) -> Result<ThermoResult> {
    validate(l, 0.0)?;
    let gamma = m.require_drude("eddy Casimir energy")?;
    validate_cutoff(cutoff, gamma)?;
    let value = integrate_phase_weighted(
        l,
        gamma,
        &[],
        |xi| zero_point_slope(xi, cutoff),
        false,
        quad,
        "zero-point energy",
    )?;
    Ok(ThermoResult {
        quantity: Quantity::Energy,
        value,
        separation: l,
        temperature: 0.0,
        gamma,
        cutoff: Some(cutoff),
        normalization: Some(perfect_reflector_energy(l)),
    })
}

/// Eddy-current pressure `∂E/∂L` at `T = 0`, from `∂G/∂L` under the
/// integral. Negative values are repulsive.
pub fn casimir_pressure_t0(
    l: f64,
    m: &MaterialModel,
    cutoff: f64,
    quad: &QuadratureSpec,
) -> Result<ThermoResult> {
    validate(l, 0.0)?;
    let gamma = m.require_drude("eddy Casimir pressure")?;
    validate_cutoff(cutoff, gamma)?;
    let value = integrate_phase_weighted(
        l,
        gamma,
        &[],
        |xi| zero_point_slope(xi, cutoff),
        true,
        quad,
        "zero-point pressure",
    )?;
    Ok(ThermoResult {
        quantity: Quantity::Pressure,
        value,
        separation: l,
        temperature: 0.0,
        gamma,
        cutoff: Some(cutoff),
        normalization: Some(perfect_reflector_pressure(l)),
    })
}

fn thermal_scales(t: f64) -> [f64; 1] {
    [2.0 * PI * t]
}

fn frozen(m: &MaterialModel, t: f64) -> Result<MaterialModel> {
    m.require_drude("eddy thermodynamics")?;
    m.at_temperature(t)
}

/// `F(T) - F(0)` of the eddy continuum, `-(1/2π) ∫ G binet'(ξ/2πT) dξ`.
/// Cutoff-free.
pub fn thermal_free_energy(
    t: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(l, t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let m = frozen(m, t)?;
    let tau = 2.0 * PI * t;
    let v = integrate_phase_weighted(
        l,
        m.gamma(),
        &thermal_scales(t),
        |xi| binet_d1(xi / tau),
        false,
        quad,
        "thermal free energy",
    )?;
    Ok(-v / (2.0 * PI))
}

/// Free energy `F(T, L)` including the zero-point part with cutoff Λ.
pub fn free_energy(
    t: f64,
    l: f64,
    m: &MaterialModel,
    cutoff: f64,
    quad: &QuadratureSpec,
) -> Result<ThermoResult> {
    validate(l, t)?;
    let frozen_m = frozen(m, t.max(0.0))?;
    let e0 = casimir_energy_t0(l, &frozen_m, cutoff, quad)?;
    let df = thermal_free_energy(t, l, m, quad)?;
    Ok(ThermoResult {
        quantity: Quantity::FreeEnergy,
        value: e0.value + df,
        temperature: t,
        ..e0
    })
}

/// Entropy `S = -∂F/∂T` from the exact per-mode entropy kernel.
pub fn entropy(t: f64, l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<ThermoResult> {
    validate(l, t)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("entropy needs T > 0".into()));
    }
    let frozen_m = frozen(m, t)?;
    let tau = 2.0 * PI * t;
    let v = integrate_phase_weighted(
        l,
        frozen_m.gamma(),
        &thermal_scales(t),
        |xi| {
            let x = xi / tau;
            x * binet_d2(x)
        },
        false,
        quad,
        "entropy",
    )?;
    Ok(ThermoResult {
        quantity: Quantity::Entropy,
        value: -v / tau,
        separation: l,
        temperature: t,
        gamma: frozen_m.gamma(),
        cutoff: None,
        normalization: Some(ZETA3 / (16.0 * PI * l * l)),
    })
}

/// High-temperature limit of the entropy, `S∞(L) = -(1/2) ∫ G(ξ)/ξ dξ`.
pub fn s_infinity(l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    validate(l, 0.0)?;
    let gamma = m.require_drude("high-temperature entropy")?;
    let v = integrate_phase_weighted(l, gamma, &[], |xi| 1.0 / xi, false, quad, "S_infinity")?;
    Ok(-0.5 * v)
}

/// Shape function `f(L/λ) = -16π L² S∞(L)/ζ(3)`, which tends to 1 for L ≫ λ.
pub fn entropy_shape_factor(l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    Ok(-16.0 * PI * l * l * s_infinity(l, m, quad)? / ZETA3)
}

/// Closed-form entropy regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyAsymptotes {
    /// `(π²/3) T ρ(0; L)`, valid for `T ≪ ξ_L`.
    pub low_temperature: f64,
    /// `-ζ(3)/(16π L²)`, valid for `T ≫ ξ_L` and `L ≫ λ`.
    pub high_temperature: f64,
}

pub fn entropy_asymptotes(t: f64, l: f64, m: &MaterialModel) -> Result<EntropyAsymptotes> {
    validate(l, t)?;
    let frozen_m = frozen(m, t)?;
    let rho0 = crate::density::rho_zero_limit(&frozen_m)?;
    Ok(EntropyAsymptotes {
        low_temperature: PI * PI / 3.0 * t * rho0,
        high_temperature: -ZETA3 / (16.0 * PI * l * l),
    })
}

/// `P(T) - P(0)` of the eddy continuum, `∂/∂L` of [`thermal_free_energy`].
pub fn thermal_pressure_eddy(
    t: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(l, t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let m = frozen(m, t)?;
    let tau = 2.0 * PI * t;
    let v = integrate_phase_weighted(
        l,
        m.gamma(),
        &thermal_scales(t),
        |xi| binet_d1(xi / tau),
        true,
        quad,
        "thermal pressure",
    )?;
    Ok(-v / (2.0 * PI))
}

/// Distance regime of the zero-temperature asymptotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `L ≪ λ`: `E ≈ E₀ - a L`.
    Short,
    /// `L ≫ 1/γ`: `E ≈ A √γ L^{-7/2} ln(ΛL)`.
    Long,
}

/// Zero-temperature energy asymptote with coefficients fitted to the full
/// numerical energy by least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAsymptote {
    pub regime: Regime,
    pub gamma: f64,
    pub cutoff: f64,
    /// Short: the constant E₀. Long: unused (zero).
    pub constant: f64,
    /// Short: slope in units of `γ ln(Λ/γ)`. Long: amplitude A.
    pub amplitude: f64,
}

impl EnergyAsymptote {
    /// Separations used for the fit.
    pub fn calibration_points(regime: Regime, gamma: f64) -> Vec<f64> {
        let (lo, hi): (f64, f64) = match regime {
            Regime::Short => (0.01, 0.05),
            Regime::Long => (10.0 / gamma, 100.0 / gamma),
        };
        (0..6)
            .map(|i| lo * (hi / lo).powf(f64::from(i) / 5.0))
            .collect()
    }

    pub fn calibrate(
        regime: Regime,
        m: &MaterialModel,
        cutoff: f64,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        let gamma = m.require_drude("energy asymptote")?;
        let pts = Self::calibration_points(regime, gamma);
        let mut xs = Vec::with_capacity(pts.len());
        let mut ys = Vec::with_capacity(pts.len());
        for &l in &pts {
            xs.push(shape(regime, l, gamma, cutoff));
            ys.push(casimir_energy_t0(l, m, cutoff, quad)?.value);
        }
        let (constant, amplitude) = match regime {
            Regime::Short => {
                let n = xs.len() as f64;
                let mx = xs.iter().sum::<f64>() / n;
                let my = ys.iter().sum::<f64>() / n;
                let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
                let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
                let a = sxy / sxx;
                (my - a * mx, a)
            }
            Regime::Long => {
                let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
                let sxx: f64 = xs.iter().map(|x| x * x).sum();
                (0.0, sxy / sxx)
            }
        };
        Ok(Self {
            regime,
            gamma,
            cutoff,
            constant,
            amplitude,
        })
    }

    /// Whether `l` lies in the regime the asymptote describes.
    pub fn in_regime(&self, l: f64) -> bool {
        match self.regime {
            Regime::Short => l < 0.1,
            Regime::Long => l > 10.0 / self.gamma,
        }
    }

    pub fn energy(&self, l: f64) -> f64 {
        self.constant + self.amplitude * shape(self.regime, l, self.gamma, self.cutoff)
    }

    /// `dE/dL` of the asymptote.
    pub fn pressure(&self, l: f64) -> f64 {
        let d = match self.regime {
            Regime::Short => -self.gamma * (self.cutoff / self.gamma).ln(),
            Regime::Long => self.gamma.sqrt() * l.powf(-4.5) * (1.0 - 3.5 * (self.cutoff * l).ln()),
        };
        self.amplitude * d
    }
}

fn shape(regime: Regime, l: f64, gamma: f64, cutoff: f64) -> f64 {
    match regime {
        Regime::Short => -gamma * l * (cutoff / gamma).ln(),
        Regime::Long => gamma.sqrt() * l.powf(-3.5) * (cutoff * l).ln(),
    }
}

/// Calibrated asymptotic energy at `l`; errors when `l` is outside the
/// regime.
pub fn asymptotic_energy(
    l: f64,
    m: &MaterialModel,
    cutoff: f64,
    regime: Regime,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let a = EnergyAsymptote::calibrate(regime, m, cutoff, quad)?;
    if !a.in_regime(l) {
        return Err(Error::InvalidParameter(format!(
            "L = {l} is outside the {regime:?} regime"
        )));
    }
    Ok(a.energy(l))
}

//! TE-polarization Lifshitz theory on the imaginary frequency axis.
//!
//! With `h(ξ) = ∫ k dk/(2π) ln[1 - r²(iξ) e^{-2κL}]` the free energy per
//! area is the Matsubara sum `F = T Σ'_n h(2πnT)` (n = 0 halved), and the
//! zero-temperature energy is `E = (1/2π) ∫₀^∞ h(ξ) dξ`. On the imaginary
//! axis `κ_m² - κ² = ξ/(ξ + γ)` (Drude) or 1 (plasma), so the reflection
//! coefficient only depends on κ:
//!
//! ```text
//! r_TE = (κ - κ_m)/(κ + κ_m) = -(κ_m² - κ²)/(κ + κ_m)²
//! ```
//!
//! and `k dk = κ dκ` turns the k-integral into one over `κ ≥ ξ`.
//!
//! The thermal parts `F(T) - E` and `P(T) - P(0)` are formed as the
//! Matsubara sum minus the frequency integral, both converged far below the
//! requested tolerance; at low temperature they are many orders of magnitude
//! below the totals.

use std::f64::consts::PI;

use rayon::prelude::*;

use num_complex::Complex64;

use crate::density::{full_dos_at, integrate_panels, rho_lifshitz_real, InnerLog, KAPPA_L_MAX};
use crate::numerics::{adaptive_integrate, QuadResult, QuadratureSpec};
use crate::units::{MaterialModel, ModelKind};
use crate::{checked, Error, Result};

/// Mirror description for the reference Lifshitz calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MirrorKind {
    Drude(MaterialModel),
    Plasma(MaterialModel),
    /// `r_TE = -1` at every frequency.
    PerfectReflector,
}

impl MirrorKind {
    /// Build from a material model, picking the matching variant.
    pub fn from_model(m: MaterialModel) -> Self {
        match m.kind() {
            ModelKind::Drude => MirrorKind::Drude(m),
            ModelKind::Plasma => MirrorKind::Plasma(m),
        }
    }

    /// Freeze a temperature-dependent scattering rate.
    fn at_temperature(&self, t: f64) -> Result<Self> {
        Ok(match self {
            MirrorKind::Drude(m) if m.rate_law().is_some() => {
                MirrorKind::Drude(m.at_temperature(t)?)
            }
            other => *other,
        })
    }

    /// `κ_m² - κ²` at imaginary frequency ξ; `None` for the perfect reflector.
    fn coupling(&self, xi: f64) -> Option<f64> {
        match self {
            MirrorKind::Drude(m) => Some(if xi == 0.0 {
                0.0
            } else {
                xi / (xi + m.gamma())
            }),
            MirrorKind::Plasma(_) => Some(1.0),
            MirrorKind::PerfectReflector => None,
        }
    }

    /// Scales at which the integrands change character.
    fn scales(&self, l: f64) -> Vec<f64> {
        let mut s = vec![1.0 / l];
        if let MirrorKind::Drude(m) = self {
            s.push(m.gamma());
            s.push(m.gamma() / (l * l));
        }
        s
    }
}

/// TE reflection coefficient at imaginary frequency, as a function of κ.
pub fn te_reflection_imaginary(mirror: &MirrorKind, kappa: f64, xi: f64) -> f64 {
    match mirror.coupling(xi) {
        None => -1.0,
        Some(c) => {
            let km = (kappa * kappa + c).sqrt();
            -c / ((kappa + km) * (kappa + km))
        }
    }
}

/// Which κ-integrand to use.
#[derive(Clone, Copy)]
enum Integrand {
    /// `ln(1 - R)`, the free energy.
    Log,
    /// `∂_L ln(1 - R) = 2κR/(1 - R)`, the pressure.
    DerivL,
}

/// `∫ k dk/(2π) (…)` at imaginary frequency ξ.
fn k_integral(
    mirror: &MirrorKind,
    xi: f64,
    l: f64,
    which: Integrand,
    spec: &QuadratureSpec,
) -> QuadResult {
    let top = xi + KAPPA_L_MAX / l;
    let f = |kv: f64| {
        let r = te_reflection_imaginary(mirror, kv, xi);
        let big_r = r * r * (-2.0 * kv * l).exp();
        let v = match which {
            Integrand::Log => (-big_r).ln_1p(),
            Integrand::DerivL => 2.0 * kv * big_r / (1.0 - big_r),
        };
        kv * v
    };
    // Breakpoints where e^{-2κL} and r(κ) change.
    let mut points = vec![xi];
    let mut cands = vec![xi + 1.0 / l, xi + 5.0 / l];
    if let Some(c) = mirror.coupling(xi) {
        if c > 0.0 {
            cands.push(c.sqrt());
        }
    }
    cands.sort_by(f64::total_cmp);
    for p in cands {
        if p > *points.last().unwrap() && p < top {
            points.push(p);
        }
    }
    points.push(top);
    points
        .windows(2)
        .map(|w| adaptive_integrate(f, w[0], w[1], spec))
        .fold(QuadResult::zero(), QuadResult::merge)
        .scale(1.0 / (2.0 * PI))
}

fn tight(quad: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: (quad.rel_tol * 1e-5).max(1e-13),
        abs_tol: 0.0,
        max_refinements: quad.max_refinements.max(4000),
        ..*quad
    }
}

fn validate(t: f64, l: f64) -> Result<()> {
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

/// `(1/2π) ∫₀^∞ dξ ∫ k dk/(2π) (…)`.
fn xi_integral(
    mirror: &MirrorKind,
    l: f64,
    which: Integrand,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let inner = quad.inner();
    let log = InnerLog::default();
    let support = KAPPA_L_MAX / l;
    let r = integrate_panels(
        support,
        false,
        &mirror.scales(l),
        |xi| log.value(k_integral(mirror, xi, l, which, &inner)),
        &quad.relative(),
    );
    Ok(log.check(
        "Lifshitz frequency integral",
        r,
        1e3 * inner.rel_tol.max(1e-12),
    )? / (2.0 * PI))
}

/// `T Σ'_n (…)(ξ_n)` truncated where `e^{-2ξ_n L}` underflows.
fn matsubara_sum(
    mirror: &MirrorKind,
    t: f64,
    l: f64,
    which: Integrand,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let step = 2.0 * PI * t;
    let n_max = (KAPPA_L_MAX / l / step).floor() as usize;
    if n_max > 50_000_000 {
        return Err(Error::InvalidParameter(format!(
            "temperature {t} too low for a Matsubara sum at L = {l}"
        )));
    }
    let terms: Vec<QuadResult> = (0..=n_max)
        .into_par_iter()
        .map(|n| k_integral(mirror, n as f64 * step, l, which, spec))
        .collect();
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for (n, r) in terms.iter().enumerate() {
        if !r.converged {
            worst = worst.max(r.error_estimate / r.value.abs().max(f64::MIN_POSITIVE));
        }
        sum += if n == 0 { 0.5 * r.value } else { r.value };
    }
    if worst > 1e3 * spec.rel_tol.max(1e-12) {
        return Err(Error::Quadrature {
            what: "Matsubara term",
            value: sum * t,
            error: worst * (sum * t).abs(),
        });
    }
    Ok(t * sum)
}

/// TE free energy per area, `T Σ'_n ∫ k dk/(2π) ln[1 - r² e^{-2κ_n L}]`.
/// At `T = 0` the sum becomes the frequency integral.
pub fn matsubara_free_energy(
    t: f64,
    l: f64,
    mirror: &MirrorKind,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(t, l)?;
    let mirror = mirror.at_temperature(t)?;
    if t == 0.0 {
        return xi_integral(&mirror, l, Integrand::Log, quad);
    }
    matsubara_sum(&mirror, t, l, Integrand::Log, &quad.relative())
}

/// TE pressure `∂F/∂L` (positive is attractive), differentiated
/// analytically under the integral.
pub fn lifshitz_pressure(
    t: f64,
    l: f64,
    mirror: &MirrorKind,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(t, l)?;
    let mirror = mirror.at_temperature(t)?;
    if t == 0.0 {
        return xi_integral(&mirror, l, Integrand::DerivL, quad);
    }
    matsubara_sum(&mirror, t, l, Integrand::DerivL, &quad.relative())
}

fn thermal_part(
    t: f64,
    l: f64,
    mirror: &MirrorKind,
    which: Integrand,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(t, l)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let mirror = mirror.at_temperature(t)?;
    let spec = tight(quad);
    let sum = matsubara_sum(&mirror, t, l, which, &spec)?;
    let mut scales = mirror.scales(l);
    scales.push(2.0 * PI * t);
    let inner = spec;
    let log = InnerLog::default();
    let r = integrate_panels(
        KAPPA_L_MAX / l,
        false,
        &scales,
        |xi| log.value(k_integral(&mirror, xi, l, which, &inner)),
        &spec,
    );
    let integral = log.check("Lifshitz frequency integral", r, 1e-10)? / (2.0 * PI);
    Ok(sum - integral)
}

/// Temperature-dependent part `F(T) - F(0)` of the TE free energy. With a
/// temperature-dependent scattering rate both terms use `γ(T)`.
pub fn thermal_free_energy(
    t: f64,
    l: f64,
    mirror: &MirrorKind,
    quad: &QuadratureSpec,
) -> Result<f64> {
    thermal_part(t, l, mirror, Integrand::Log, quad)
}

/// Temperature-dependent part `P(T) - P(0)` of the TE pressure.
pub fn thermal_pressure(t: f64, l: f64, mirror: &MirrorKind, quad: &QuadratureSpec) -> Result<f64> {
    thermal_part(t, l, mirror, Integrand::DerivL, quad)
}

/// Thermal free energy from the real-frequency TE density of states,
/// `∫₀^∞ dω ρ(ω; L) T ln(1 - e^{-ω/T})`. Only the thermal part is formed:
/// the zero-point part `∫ ρ ω/2` of the full density has no convergent
/// real-axis integral.
pub fn real_frequency_thermal_free_energy(
    t: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate(t, l)?;
    if !(t > 0.0) {
        return Ok(0.0);
    }
    let m = m.at_temperature(t)?;
    // The density changes sign, so the inner integrals get an absolute
    // floor set by its magnitude at ω = T.
    let scale = rho_lifshitz_real(t, l, &m, quad)?.abs();
    let inner = QuadratureSpec {
        abs_tol: quad.rel_tol * scale,
        ..quad.relative()
    };
    let failure = std::cell::RefCell::new(None);
    let top = 60.0 * t;
    let mut scales = vec![t, 1.0 / l, 2.0 * PI / l];
    if m.is_drude() {
        scales.push(m.gamma() / (l * l));
    }
    let r = integrate_panels(
        top,
        false,
        &scales,
        |w| {
            if w == 0.0 {
                return 0.0;
            }
            let occupation = t * (-(-w / t).exp()).ln_1p();
            match full_dos_at(Complex64::new(w, 0.0), l, &m, &inner) {
                Ok(rho) => rho * occupation,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &quad.relative(),
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    checked("real-frequency free energy", r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::ZETA3;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn reflection_limits() {
        let drude = MirrorKind::Drude(MaterialModel::drude(0.08).unwrap());
        assert_eq!(te_reflection_imaginary(&drude, 0.3, 0.0), 0.0);
        assert_eq!(
            te_reflection_imaginary(&MirrorKind::PerfectReflector, 0.3, 0.1),
            -1.0
        );
        let plasma = MirrorKind::Plasma(MaterialModel::plasma());
        let r = te_reflection_imaginary(&plasma, 0.5, 0.2);
        let km = (0.25f64 + 1.0).sqrt();
        assert!((r - (0.5 - km) / (0.5 + km)).abs() < 1e-15);
    }

    #[test]
    fn perfect_reflector_zero_temperature() {
        for l in [0.5, 2.0] {
            let e = matsubara_free_energy(0.0, l, &MirrorKind::PerfectReflector, &spec()).unwrap();
            let p = lifshitz_pressure(0.0, l, &MirrorKind::PerfectReflector, &spec()).unwrap();
            let e_ref = -PI.powi(2) / (1440.0 * l.powi(3));
            let p_ref = PI.powi(2) / (480.0 * l.powi(4));
            assert!((e / e_ref - 1.0).abs() < 1e-7, "{e} {e_ref}");
            assert!((p / p_ref - 1.0).abs() < 1e-7, "{p} {p_ref}");
        }
    }

    #[test]
    fn perfect_reflector_high_temperature() {
        let (t, l) = (2.0, 3.0);
        let p = thermal_pressure(t, l, &MirrorKind::PerfectReflector, &spec()).unwrap();
        let p0 = PI.powi(2) / (480.0 * l.powi(4));
        let norm = ZETA3 * t / (8.0 * PI * l.powi(3));
        // Only the static term survives at T L >> 1.
        assert!(((p + p0) / norm - 1.0).abs() < 1e-7, "{}", (p + p0) / norm);
    }

    #[test]
    fn thermal_part_matches_difference_of_totals() {
        let mirror = MirrorKind::Plasma(MaterialModel::plasma());
        let (t, l) = (0.05, 2.0);
        let f_t = matsubara_free_energy(t, l, &mirror, &spec()).unwrap();
        let f_0 = matsubara_free_energy(0.0, l, &mirror, &spec()).unwrap();
        let d = thermal_free_energy(t, l, &mirror, &spec()).unwrap();
        assert!(
            ((f_t - f_0) - d).abs() < 1e-6 * d.abs(),
            "{} {}",
            f_t - f_0,
            d
        );
    }

    #[test]
    fn drude_static_term_vanishes() {
        let m = MirrorKind::Drude(MaterialModel::drude(0.08).unwrap());
        let r = k_integral(&m, 0.0, 1.0, Integrand::Log, &spec());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn free_energies_are_negative() {
        for mirror in [
            MirrorKind::PerfectReflector,
            MirrorKind::Plasma(MaterialModel::plasma()),
        ] {
            for &(t, l) in &[(0.01, 1.0), (0.2, 5.0)] {
                assert!(matsubara_free_energy(t, l, &mirror, &spec()).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn pressure_is_l_derivative() {
        let mirror = MirrorKind::Drude(MaterialModel::drude(0.08).unwrap());
        let (t, l) = (0.02, 1.5);
        let h = 1e-3 * l;
        let d = crate::numerics::central_derivative(
            |x| matsubara_free_energy(t, x, &mirror, &spec()).unwrap(),
            l,
            h,
        );
        let p = lifshitz_pressure(t, l, &mirror, &spec()).unwrap();
        assert!((d.value / p - 1.0).abs() < 1e-6, "{} {}", d.value, p);
    }

    #[test]
    fn tail_doubling() {
        // Extending the cutoff leaves the sum unchanged.
        let mirror = MirrorKind::Plasma(MaterialModel::plasma());
        let (t, l) = (0.03, 1.0);
        let a = matsubara_free_energy(t, l, &mirror, &spec()).unwrap();
        let step = 2.0 * PI * t;
        let n_max = (KAPPA_L_MAX / l / step).floor() as usize;
        let extra: f64 = (n_max + 1..=2 * n_max)
            .map(|n| k_integral(&mirror, n as f64 * step, l, Integrand::Log, &spec()).value)
            .sum();
        assert!((t * extra).abs() < 1e-8 * a.abs());
    }
}

//! The acceptance checks, shared by `eddy-casimir check` and the
//! `acceptance` test target.
//!
//! Each check measures something, compares it with a fixed tolerance and
//! reports the measured numbers whether it passes or not.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::log_grid;
use crate::density::{
    rho_lifshitz_real, rho_real, rho_tilde, rho_tilde_scattering, rho_zero_limit,
};
use crate::lifshitz::{self, MirrorKind};
use crate::numerics::cubic::relative_residual;
use crate::numerics::special::ZETA3;
use crate::numerics::{
    adaptive_integrate, central_derivative, cubic_roots, integrate_sqrt_lower,
    integrate_to_infinity, QuadratureSpec,
};
use crate::thermo;
use crate::units::{diffusion_coefficient, MaterialModel};
use crate::Result;

pub const CHECK_COUNT: u32 = 12;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    /// Measured values and the tolerance they were held to.
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn title(id: u32) -> &'static str {
    match id {
        1 => "zero-frequency eddy DOS",
        2 => "cut density, two routes",
        3 => "low-temperature entropy slope",
        4 => "high-temperature entropy plateau",
        5 => "Nernst theorem and residual entropy",
        6 => "entropy does not depend on the cutoff",
        7 => "full Drude TE DOS is the eddy DOS at low frequency",
        8 => "Drude minus eddy equals plasma (thermal pressure)",
        9 => "T = 0 eddy pressure asymptotics",
        10 => "Matsubara and real-frequency free energies",
        11 => "low-temperature expansion coefficients",
        12 => "quadrature and cubic solver floor",
        _ => "unknown check",
    }
}

/// Run one check. Errors inside a check count as a failure.
pub fn run(id: u32) -> CheckOutcome {
    let start = Instant::now();
    let result = match id {
        1 => check_zero_frequency_dos(),
        2 => check_cut_density_routes(),
        3 => check_low_temperature_entropy(),
        4 => check_entropy_plateau(),
        5 => check_nernst(),
        6 => check_cutoff_independence(),
        7 => check_full_vs_eddy_dos(),
        8 => check_pressure_decomposition(),
        9 => check_pressure_asymptotics(),
        10 => check_matsubara_vs_real_frequency(),
        11 => check_low_temperature_expansion(),
        12 => check_numerics_floor(),
        _ => Ok((false, format!("no check {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        id,
        title: title(id),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all() -> Vec<CheckOutcome> {
    (1..=CHECK_COUNT).map(run).collect()
}

type Check = Result<(bool, String)>;

fn drude(gamma: f64) -> MaterialModel {
    MaterialModel::drude(gamma).expect("valid scattering rate")
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Least-squares coefficients of `y ≈ Σ c_j basis_j(x)`.
fn least_squares(xs: &[f64], ys: &[f64], basis: &[fn(f64) -> f64]) -> Vec<f64> {
    let a = DMatrix::from_fn(xs.len(), basis.len(), |i, j| basis[j](xs[i]));
    let b = DVector::from_column_slice(ys);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-14)
        .expect("full SVD")
        .iter()
        .copied()
        .collect()
}

fn check_zero_frequency_dos() -> Check {
    let m = drude(0.08);
    let q = QuadratureSpec::default();
    let expected = rho_zero_limit(&m)?;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for l in [10.0, 30.0, 100.0] {
        let r = rho_real(0.0, l, &m, &q)? / expected;
        worst = worst.max((r - 1.0).abs());
        parts.push(format!("L={l}: {r:.5}"));
    }
    Ok((
        worst < 0.02,
        format!(
            "rho(0)/limit {}; max dev {worst:.2e} (tol 2e-2)",
            parts.join(", ")
        ),
    ))
}

fn check_cut_density_routes() -> Check {
    let gamma = 0.08;
    let m = drude(gamma);
    let q = QuadratureSpec::default().with_rel_tol(1e-10);
    let ls = log_grid(0.1, 100.0, 10);
    let xis: Vec<f64> = log_grid(1e-3, 0.95, 10).iter().map(|f| f * gamma).collect();
    let pairs: Vec<(f64, f64)> = ls
        .iter()
        .flat_map(|&l| xis.iter().map(move |&x| (x, l)))
        .collect();
    let devs: Result<Vec<f64>> = pairs
        .par_iter()
        .map(|&(xi, l)| {
            let a = rho_tilde(xi, l, &m, &q)?;
            let b = rho_tilde_scattering(xi, l, &m, &q)?;
            Ok((a - b).abs() / a.abs())
        })
        .collect();
    let worst = devs?.into_iter().fold(0.0, f64::max);
    Ok((
        worst < 1e-6,
        format!("max relative difference {worst:.2e} on 10x10 grid (tol 1e-6)"),
    ))
}

fn check_low_temperature_entropy() -> Check {
    let (gamma, l) = (0.08, 10.0);
    let m = drude(gamma);
    let q = QuadratureSpec::default();
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let ts: Vec<f64> = log_grid(1e-3, 1e-2, 11).iter().map(|x| x * xi_l).collect();
    let s: Result<Vec<f64>> = ts
        .par_iter()
        .map(|&t| Ok(thermo::entropy(t, l, &m, &q)?.value))
        .collect();
    // S = -dF/dT with F = c₂T² + c₅/₂T^{5/2} + c₃T³ + ...
    let c = least_squares(&ts, &s?, &[|t| t, |t| t * t.sqrt(), |t| t * t]);
    let expected = PI * PI / 3.0 * rho_real(0.0, l, &m, &q)?;
    let dev = rel_dev(c[0], expected);
    Ok((
        dev < 0.03,
        format!(
            "fitted slope {:.6e} vs (pi^2/3) rho(0;L) = {expected:.6e}; dev {dev:.2e} (tol 3e-2)",
            c[0]
        ),
    ))
}

fn check_entropy_plateau() -> Check {
    let (gamma, l) = (0.08, 100.0);
    let m = drude(gamma);
    let q = QuadratureSpec::default();
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let s = thermo::entropy(100.0 * xi_l, l, &m, &q)?.value;
    let reference = -ZETA3 / (16.0 * PI * l * l);
    let f = thermo::entropy_shape_factor(l, &m, &q)?;
    let dev = rel_dev(s, reference);
    Ok((
        dev < 0.02,
        format!(
            "S/(-zeta3/(16 pi L^2)) = {:.4} at T = 100 xi_L, L = 100 (S_inf ratio f = {f:.4}); dev {dev:.2e} (tol 2e-2)",
            s / reference
        ),
    ))
}

fn check_nernst() -> Check {
    let (gamma, l) = (0.08, 10.0);
    let q = QuadratureSpec::default();
    let m = drude(gamma);
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let s = thermo::entropy(1e-4 * xi_l, l, &m, &q)?.value;
    let ratio_fixed = s / thermo::s_infinity(l, &m, &q)?;
    // γ(T) = γ₀ (T/T₀)²: ξ_L/T → 0 as T → 0.
    let crystal = MaterialModel::perfect_crystal(gamma, 0.01, 2)?;
    let t = 1e-4;
    let s = thermo::entropy(t, l, &crystal, &q)?.value;
    let s_inf = thermo::s_infinity(l, &crystal.at_temperature(t)?, &q)?;
    let ratio_crystal = s / s_inf;
    let pass = ratio_fixed.abs() < 1e-2 && rel_dev(ratio_crystal, 1.0) < 0.05;
    Ok((
        pass,
        format!(
            "fixed gamma: S/S_inf = {ratio_fixed:.2e} at T = 1e-4 xi_L (tol 1e-2); \
             gamma ~ T^2: S/S_inf = {ratio_crystal:.4} at T = {t} (tol 5%)"
        ),
    ))
}

fn check_cutoff_independence() -> Check {
    let m = drude(0.08);
    let q = QuadratureSpec::default();
    let lambda = thermo::default_cutoff(&m);
    let mut worst: f64 = 0.0;
    for (t, l) in [(1e-3, 3.0), (1e-2, 1.0), (3e-4, 10.0)] {
        // S = -∂F/∂T from the full free energy, zero-point part included.
        let s_at = |cutoff: f64| -> Result<f64> {
            let mut failure = None;
            let d = central_derivative(
                |x| match thermo::free_energy(x, l, &m, cutoff, &q) {
                    Ok(r) => r.value,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                t,
                1e-2 * t,
            );
            match failure {
                Some(e) => Err(e),
                None => Ok(-d.value),
            }
        };
        let a = s_at(lambda)?;
        let b = s_at(2.0 * lambda)?;
        worst = worst.max((a - b).abs() / a.abs());
    }
    Ok((
        worst < 1e-8,
        format!("max |S(2 Lambda) - S(Lambda)|/|S| = {worst:.2e} over 3 points (tol 1e-8)"),
    ))
}

fn check_full_vs_eddy_dos() -> Check {
    let gamma = 1e-3;
    let m = drude(gamma);
    let l = 20.0 * PI;
    let q = QuadratureSpec::default();
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let ws = log_grid(xi_l, 0.1 * gamma, 12);
    let devs: Result<Vec<f64>> = ws
        .par_iter()
        .map(|&w| {
            Ok(rel_dev(
                rho_lifshitz_real(w, l, &m, &q)?,
                rho_real(w, l, &m, &q)?,
            ))
        })
        .collect();
    let worst = devs?.into_iter().fold(0.0, f64::max);
    Ok((
        worst < 0.05,
        format!("max |rho_full/rho_eddy - 1| = {worst:.2e} on xi_L..0.1 gamma (tol 5e-2)"),
    ))
}

fn check_pressure_decomposition() -> Check {
    let (gamma, t) = (0.08, 0.003);
    let m = drude(gamma);
    let q = QuadratureSpec::default();
    let scale = (diffusion_coefficient(&m)? / t).sqrt();
    let ls = log_grid(0.1 * scale, 10.0 * scale, 9);
    let drude_mirror = MirrorKind::Drude(m);
    let plasma = MirrorKind::Plasma(MaterialModel::plasma());
    let devs: Result<Vec<f64>> = ls
        .par_iter()
        .map(|&l| {
            let pd = lifshitz::thermal_pressure(t, l, &drude_mirror, &q)?;
            let pp = lifshitz::thermal_pressure(t, l, &plasma, &q)?;
            let pe = thermo::thermal_pressure_eddy(t, l, &m, &q)?;
            Ok(((pd - pe) - pp).abs() / (ZETA3 * t / (8.0 * PI * l.powi(3))))
        })
        .collect();
    let worst = devs?.into_iter().fold(0.0, f64::max);
    Ok((
        worst < 0.1,
        format!(
            "max |(P_D - P_eddy) - P_plasma| = {worst:.2e} of zeta3 T/(8 pi L^3), L = {:.3}..{:.3} (tol 0.1)",
            ls[0],
            ls[ls.len() - 1]
        ),
    ))
}

fn check_pressure_asymptotics() -> Check {
    let gamma = 0.08;
    let m = drude(gamma);
    let q = QuadratureSpec::default();
    let cutoff = thermo::default_cutoff(&m);
    let p = |l: f64| -> Result<f64> { Ok(thermo::casimir_pressure_t0(l, &m, cutoff, &q)?.value) };
    // Plateau: local log-slopes of |P| must shrink toward zero as L → 0.
    let short = [0.1, 0.03, 0.01, 0.003, 0.001];
    let ps: Result<Vec<f64>> = short.iter().map(|&l| p(l)).collect();
    let ps = ps?;
    let slopes: Vec<f64> = (0..short.len() - 1)
        .map(|i| (ps[i] / ps[i + 1]).ln() / (short[i] / short[i + 1]).ln())
        .collect();
    let shrinking = slopes.windows(2).all(|w| w[1].abs() < w[0].abs());
    let last = slopes[slopes.len() - 1];
    let plateau = shrinking && last.abs() < 0.05;
    // Long distance: power law of -dE/dL for L γ ∈ [10, 100].
    let ls = log_grid(10.0 / gamma, 100.0 / gamma, 8);
    let vals: Result<Vec<f64>> = ls.par_iter().map(|&l| Ok((-p(l)?).ln())).collect();
    let lnl: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
    let c = least_squares(&lnl, &vals?, &[|_| 1.0, |x| x]);
    let exponent = c[1];
    let power = (exponent + 3.5).abs() < 0.15;
    Ok((
        plateau && power,
        format!(
            "short: log-slopes {} (need shrinking, last < 0.05): {}; \
             long: exponent {exponent:.3} vs -3.5 +- 0.15: {}",
            slopes
                .iter()
                .map(|s| format!("{s:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
            if plateau { "ok" } else { "fail" },
            if power { "ok" } else { "fail" }
        ),
    ))
}

fn check_matsubara_vs_real_frequency() -> Check {
    let m = drude(0.08);
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (t, l) in [(0.01, 10.0), (0.001, 100.0)] {
        let a = lifshitz::thermal_free_energy(t, l, &MirrorKind::Drude(m), &q)?;
        let b = lifshitz::real_frequency_thermal_free_energy(t, l, &m, &q)?;
        let dev = rel_dev(b, a);
        worst = worst.max(dev);
        parts.push(format!("(T={t}, L={l}): {a:.6e} vs {b:.6e}"));
    }
    Ok((
        worst < 5e-3,
        format!(
            "thermal parts {}; max dev {worst:.2e} (tol 5e-3)",
            parts.join(", ")
        ),
    ))
}

fn check_low_temperature_expansion() -> Check {
    let (gamma, l) = (0.08, 1.0);
    let m = drude(gamma);
    let q = QuadratureSpec::default();
    let xi_l = diffusion_coefficient(&m)? / (l * l);
    let ts: Vec<f64> = log_grid(1e-3, 2e-2, 10).iter().map(|x| x * xi_l).collect();
    let eddy: Result<Vec<f64>> = ts
        .par_iter()
        .map(|&t| Ok(thermo::thermal_free_energy(t, l, &m, &q)? / (t * t)))
        .collect();
    let full: Result<Vec<f64>> = ts
        .par_iter()
        .map(|&t| Ok(lifshitz::thermal_free_energy(t, l, &MirrorKind::Drude(m), &q)? / (t * t)))
        .collect();
    // F/T² = c₂ + c₅/₂ √T + c₃ T.
    let basis: [fn(f64) -> f64; 3] = [|_| 1.0, |t| t.sqrt(), |t| t];
    let ce = least_squares(&ts, &eddy?, &basis);
    let cf = least_squares(&ts, &full?, &basis);
    let d2 = rel_dev(ce[0], cf[0]);
    let d52 = rel_dev(ce[1], cf[1]);
    Ok((
        d2 < 0.05 && d52 < 0.05,
        format!(
            "T^2: {:.5e} vs {:.5e} (dev {d2:.2e}); T^5/2: {:.5e} vs {:.5e} (dev {d52:.2e}) (tol 5e-2)",
            ce[0], cf[0], ce[1], cf[1]
        ),
    ))
}

fn check_numerics_floor() -> Check {
    let q = QuadratureSpec::default().with_rel_tol(1e-12).relative();
    let cases: [(&str, f64, f64); 7] = [
        (
            "x^2 on [0,1]",
            adaptive_integrate(|x| x * x, 0.0, 1.0, &q).value,
            1.0 / 3.0,
        ),
        (
            "sin on [0,pi]",
            adaptive_integrate(f64::sin, 0.0, PI, &q).value,
            2.0,
        ),
        (
            "ln x on [0,1]",
            adaptive_integrate(f64::ln, 0.0, 1.0, &q).value,
            -1.0,
        ),
        (
            "x^-1/2 on [0,1]",
            integrate_sqrt_lower(|x| 1.0 / x.sqrt(), 0.0, 1.0, &q).value,
            2.0,
        ),
        (
            "e^-x on [0,inf)",
            integrate_to_infinity(|x| (-x).exp(), 0.0, &q).value,
            1.0,
        ),
        (
            "1/(1+x^2) on [0,inf)",
            integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, &q).value,
            PI / 2.0,
        ),
        (
            "e^-x^2 on [0,inf)",
            integrate_to_infinity(|x| (-x * x).exp(), 0.0, &q).value,
            PI.sqrt() / 2.0,
        ),
    ];
    let n_cases = cases.len();
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (name, got, want) in cases {
        let dev = rel_dev(got, want);
        worst = worst.max(dev);
        if dev > 1e-10 {
            bad.push(name);
        }
    }
    // Cubics with known roots, including a double root and complex pairs.
    let c = Complex64::new;
    let root_sets = [
        [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        [c(-1.0, 0.0), c(-1.0, 0.0), c(5.0, 0.0)],
        [c(0.5, 2.0), c(0.5, -2.0), c(-3.0, 0.0)],
        [c(1e-3, 0.0), c(1.0, 1.0), c(1e3, -2.0)],
        [c(0.0, 1.0), c(2.0, 0.5), c(-0.7, -0.1)],
    ];
    let mut residual: f64 = 0.0;
    for r in root_sets {
        let coeffs = [
            c(1.0, 0.0),
            -(r[0] + r[1] + r[2]),
            r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            -r[0] * r[1] * r[2],
        ];
        for x in cubic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3])? {
            residual = residual.max(relative_residual(&coeffs, x));
        }
    }
    Ok((
        bad.is_empty() && residual < 1e-12,
        format!(
            "{} closed-form integrals, max rel error {worst:.1e} (tol 1e-10){}; max cubic residual {residual:.1e} (tol 1e-12)",
            n_cases,
            if bad.is_empty() { String::new() } else { format!(", failing: {}", bad.join(", ")) }
        ),
    ))
}

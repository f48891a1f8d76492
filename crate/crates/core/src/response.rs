//! Reflection coefficients, decay constants and the bulk dispersion roots
//! that bound the eddy-current branch cut.
//!
//! Branch conventions: every square root is the principal one (continuous
//! in the right half-plane, `Re √ ≥ 0`). On the real frequency axis the
//! argument is understood as approached from `Im ω > 0`, which turns a
//! negative real radicand into `-i√|·|` (outgoing waves). On the eddy cut
//! `ω = -iξ` the side is fixed by [`BranchSide::RightHalfPlane`].

use num_complex::Complex64;

use crate::numerics::{cubic::relative_residual, cubic_roots, richardson_extrapolate};
use crate::units::{omega2_epsilon, MaterialModel, ModelKind};
use crate::{Error, Result};

/// Side of the negative imaginary frequency axis on which cut quantities
/// are evaluated: `ω = -iξ + 0⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchSide {
    #[default]
    RightHalfPlane,
}

/// The three roots of the bulk dispersion relation at wavevector `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoots {
    /// Diffusive root `ω = -iξ`, stored as the positive real ξ.
    pub eddy_root: f64,
    /// The remaining pair (plasma edge), complex frequencies.
    pub other_roots: [Complex64; 2],
}

fn sqrt_upper_limit(z: Complex64, omega_re: f64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        let s = (-z.re).sqrt();
        // Limit from Im ω > 0: the radicand k² - ω² picks up -i0·sign(Re ω).
        if omega_re >= 0.0 {
            Complex64::new(0.0, -s)
        } else {
            Complex64::new(0.0, s)
        }
    } else {
        z.sqrt()
    }
}

/// Vacuum decay constant `κ = √(k² - ω²)`.
pub fn kappa(k: f64, omega: Complex64) -> Complex64 {
    sqrt_upper_limit(Complex64::new(k * k, 0.0) - omega * omega, omega.re)
}

/// Decay constant inside the metal, `κ_m = √(k² - ε(ω) ω²)`, principal branch.
pub fn kappa_m(k: f64, omega: Complex64, m: &MaterialModel) -> Result<Complex64> {
    if m.kind() == ModelKind::Drude {
        let pole = omega + Complex64::new(0.0, m.gamma());
        if pole.norm() == 0.0 {
            return Err(Error::Pole(format!("{omega}")));
        }
    }
    Ok(sqrt_upper_limit(
        Complex64::new(k * k, 0.0) - omega2_epsilon(omega, m),
        omega.re,
    ))
}

/// `κ_m` on the negative imaginary axis `ω = -iξ + 0⁺`.
///
/// The limit is taken numerically: the principal root is evaluated at
/// `ω = -iξ + δ` for `δ = 10⁻⁸·max(ξ, γ)` and two halvings, then
/// Richardson-extrapolated to `δ → 0` (the function is analytic in δ).
pub fn kappa_m_on_cut(k: f64, xi: f64, m: &MaterialModel, side: BranchSide) -> Result<Complex64> {
    let BranchSide::RightHalfPlane = side;
    let gamma = m.gamma();
    let at_branch = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if m.is_drude() {
        if at_branch(xi, gamma) {
            return Err(Error::BranchPoint { k, xi });
        }
        if let Ok(xk) = eddy_branch_frequency(k, m) {
            if at_branch(xi, xk) {
                return Err(Error::BranchPoint { k, xi });
            }
        }
    }
    let delta = 1e-8 * xi.max(gamma);
    let mut re = [0.0; 3];
    let mut im = [0.0; 3];
    for i in 0..3 {
        let d = delta / f64::from(1u32 << i);
        let v = kappa_m(k, Complex64::new(d, -xi), m)?;
        re[i] = v.re;
        im[i] = v.im;
    }
    let re = richardson_extrapolate(&re, 2.0, 1, 1)?.value;
    let im = richardson_extrapolate(&im, 2.0, 1, 1)?.value;
    Ok(Complex64::new(re, im))
}

/// TE Fresnel coefficient `(κ - κ_m) / (κ + κ_m)`.
pub fn r_te(k: f64, omega: Complex64, m: &MaterialModel) -> Result<Complex64> {
    let kv = kappa(k, omega);
    let km = kappa_m(k, omega, m)?;
    Ok((kv - km) / (kv + km))
}

/// TM Fresnel coefficient `(εκ - κ_m) / (εκ + κ_m)`.
pub fn r_tm(k: f64, omega: Complex64, m: &MaterialModel) -> Result<Complex64> {
    let eps = crate::units::drude_epsilon(omega, m)?;
    let kv = kappa(k, omega);
    let km = kappa_m(k, omega, m)?;
    Ok((eps * kv - km) / (eps * kv + km))
}

/// TE coefficient on the cut, `r_TE(k, -iξ + 0⁺)`.
pub fn r_te_on_cut(k: f64, xi: f64, m: &MaterialModel) -> Result<Complex64> {
    let kv = Complex64::new((k * k + xi * xi).sqrt(), 0.0);
    let km = kappa_m_on_cut(k, xi, m, BranchSide::RightHalfPlane)?;
    Ok((kv - km) / (kv + km))
}

/// Largest parallel wavevector on the cut at frequency ξ:
/// `k_c² = ξ/(γ - ξ) - ξ²`. Zero outside `0 < ξ < γ`.
pub fn cut_edge(xi: f64, gamma: f64) -> f64 {
    if !(xi > 0.0 && xi < gamma) {
        return 0.0;
    }
    (xi / (gamma - xi) - xi * xi).max(0.0).sqrt()
}

/// Normal wavevector of the diffusive wave in the medium,
/// `k_z = √(ε(-iξ)(-iξ)² - k²) = √(ξ/(γ - ξ) - ξ² - k²)`, when real.
pub fn cut_wavenumber(k: f64, xi: f64, gamma: f64) -> Option<f64> {
    if !(xi > 0.0 && xi < gamma) {
        return None;
    }
    let kz2 = xi / (gamma - xi) - xi * xi - k * k;
    (kz2 > 0.0).then(|| kz2.sqrt())
}

/// Reflection coefficient of the diffusive wave at the metal surface,
/// `r_D = -(κ + i k_z)/(κ - i k_z)`, defined on the cut `ξ_k < ξ < γ`.
pub fn r_eddy(k: f64, xi: f64, m: &MaterialModel) -> Result<Complex64> {
    let gamma = m.require_drude("eddy reflection coefficient")?;
    let xk = eddy_branch_frequency(k, m)?;
    let tol = 1e-10;
    if !(xi > xk * (1.0 + tol) && xi < gamma * (1.0 - tol)) {
        return Err(Error::OffCut {
            xi,
            lower: xk,
            upper: gamma,
        });
    }
    let kz = cut_wavenumber(k, xi, gamma).unwrap_or(0.0);
    let kv = (k * k + xi * xi).sqrt();
    let num = Complex64::new(kv, kz);
    let den = Complex64::new(kv, -kz);
    Ok(-num / den)
}

/// Branch point `ξ_k` of the eddy cut: the purely imaginary root
/// `ω = -iξ_k` of `k² - ε(ω)ω² = 0`.
///
/// On `ω = -iξ` the cubic becomes real, `ξ³ - γξ² + (1 + k²)ξ - γk² = 0`,
/// and is strictly increasing for γ² < 3, so it has exactly one real root,
/// which lies in `[0, γ)`.
pub fn eddy_branch_frequency(k: f64, m: &MaterialModel) -> Result<f64> {
    let gamma = m.require_drude("eddy branch frequency")?;
    if !(k >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavevector must be non-negative, got {k}"
        )));
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let coeffs = [c(1.0), c(-gamma), c(1.0 + k * k), c(-gamma * k * k)];
    let roots = cubic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3])?;
    let root = roots
        .iter()
        .min_by(|a, b| a.im.abs().total_cmp(&b.im.abs()))
        .copied()
        .expect("three roots");
    // Polish in real arithmetic; the Cardano root can carry a relative
    // error at tiny k where ξ_k ~ γk² sits far below the other two roots.
    let poly = |x: f64| ((x - gamma) * x + 1.0 + k * k) * x - gamma * k * k;
    let dpoly = |x: f64| (3.0 * x - 2.0 * gamma) * x + 1.0 + k * k;
    let mut x = root.re.clamp(0.0, gamma);
    for _ in 0..6 {
        let step = poly(x) / dpoly(x);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    let residual =
        poly(x).abs() / ((x * x * x).abs() + gamma * x * x + (1.0 + k * k) * x + gamma * k * k);
    if !(residual < 1e-12) || !(x > 0.0 && x <= gamma) {
        return Err(Error::RootFinding { residual });
    }
    Ok(x)
}

/// All roots of the bulk dispersion relation
/// `ω³ + iγω² - (q² + 1)ω - iγq² = 0` (the numerator `q² - ε(ω)ω²` times
/// `ω + iγ`), with the diffusive root singled out.
pub fn bulk_dispersion_roots(q: f64, m: &MaterialModel) -> Result<DispersionRoots> {
    let gamma = m.require_drude("bulk dispersion roots")?;
    let coeffs = bulk_cubic(q, gamma);
    let roots = cubic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3])?;
    for r in &roots {
        let res = relative_residual(&coeffs, *r);
        if !(res < 1e-12) {
            return Err(Error::RootFinding { residual: res });
        }
    }
    let eddy = eddy_branch_frequency(q, m)?;
    let target = Complex64::new(0.0, -eddy);
    let (idx, _) = roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
        .expect("three roots");
    let others: Vec<Complex64> = (0..3).filter(|&i| i != idx).map(|i| roots[i]).collect();
    Ok(DispersionRoots {
        eddy_root: eddy,
        other_roots: [others[0], others[1]],
    })
}

pub(crate) fn bulk_cubic(q: f64, gamma: f64) -> [Complex64; 4] {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, gamma),
        Complex64::new(-(q * q + 1.0), 0.0),
        Complex64::new(0.0, -gamma * q * q),
    ]
}

/// TE dispersion function of the cavity, `1 - r_TE² e^{-2κL}`.
pub fn dispersion_te(k: f64, omega: Complex64, l: f64, m: &MaterialModel) -> Result<Complex64> {
    let r = r_te(k, omega, m)?;
    let kv = kappa(k, omega);
    Ok(1.0 - r * r * (-2.0 * kv * l).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn drude() -> MaterialModel {
        MaterialModel::drude(0.08).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert!((kappa(3.0, Complex64::new(0.0, -4.0)) - Complex64::new(5.0, 0.0)).norm() < 1e-15);
        assert!((kappa(1.0, Complex64::new(0.0, 0.0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let prop = kappa(0.0, Complex64::new(1.0, 0.0));
        assert!((prop - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn kappa_m_on_imaginary_axis_exceeds_kappa() {
        let m = drude();
        for &xi in &[1e-3, 0.1, 2.0] {
            let w = Complex64::new(0.0, xi);
            let km = kappa_m(0.4, w, &m).unwrap();
            assert!(km.im.abs() < 1e-14 && km.re > kappa(0.4, w).re);
        }
    }

    #[test]
    fn large_k_degeneracy() {
        let r = r_te(1e4, Complex64::new(0.3, 0.0), &drude()).unwrap();
        assert!(r.norm() < 1e-8);
    }

    #[test]
    fn cut_side_antisymmetry() {
        let m = drude();
        let k = 0.3;
        let xk = eddy_branch_frequency(k, &m).unwrap();
        let xi = 0.5 * (xk + m.gamma());
        let right = kappa_m(k, Complex64::new(1e-9, -xi), &m).unwrap();
        let left = kappa_m(k, Complex64::new(-1e-9, -xi), &m).unwrap();
        assert!(right.im.abs() > 1e-3);
        assert!((right.im + left.im).abs() < 1e-6 * right.im.abs());
    }

    #[test]
    fn on_cut_limit_matches_exact_algebra() {
        // At ω = -iξ + 0⁺ the radicand k² + ξ² - ξ/(γ-ξ) is negative with a
        // -i0 imaginary part (its δ-derivative is -i[γ/(γ-ξ)² - 2ξ]), so the
        // principal root is -i k_z.
        let m = drude();
        let (k, xi) = (0.2, 0.05);
        let kz = cut_wavenumber(k, xi, m.gamma()).unwrap();
        let km = kappa_m_on_cut(k, xi, &m, BranchSide::RightHalfPlane).unwrap();
        assert!(
            (km - Complex64::new(0.0, -kz)).norm() < 1e-12 * kz,
            "{km} vs {kz}"
        );
    }

    #[test]
    fn branch_point_is_an_error() {
        let m = drude();
        let k = 0.3;
        let xk = eddy_branch_frequency(k, &m).unwrap();
        assert!(matches!(
            kappa_m_on_cut(k, xk, &m, BranchSide::RightHalfPlane),
            Err(Error::BranchPoint { .. })
        ));
        assert!(kappa_m_on_cut(k, m.gamma(), &m, BranchSide::RightHalfPlane).is_err());
    }

    #[test]
    fn low_frequency_te_limits() {
        let d = r_te(0.5, Complex64::new(1e-9, 0.0), &drude()).unwrap();
        assert!(d.norm() < 1e-6);
        let p = r_te(1e-9, Complex64::new(1e-10, 0.0), &MaterialModel::plasma()).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn te_on_imaginary_axis_against_duplicate_formula() {
        let (k, xi, g) = (0.5, 0.1, 0.08);
        let m = MaterialModel::drude(g).unwrap();
        let r = r_te(k, Complex64::new(0.0, xi), &m).unwrap();
        // Independent real-arithmetic evaluation.
        let kv = (k * k + xi * xi).sqrt();
        let km = (k * k + xi * xi + xi / (xi + g)).sqrt();
        let expected = (kv - km) / (kv + km);
        assert!(r.im.abs() < 1e-15);
        assert!((r.re - expected).abs() < 1e-14);
        assert!(r.re > -1.0 && r.re < 0.0);
    }

    #[test]
    fn eddy_reflection_on_cut() {
        let m = drude();
        for &k in &[0.01, 0.1, 0.5, 2.0] {
            let xk = eddy_branch_frequency(k, &m).unwrap();
            for frac in [0.01, 0.3, 0.7, 0.99] {
                let xi = xk + frac * (m.gamma() - xk);
                let rd = r_eddy(k, xi, &m).unwrap();
                assert!((rd.norm() - 1.0).abs() < 1e-14);
                let rte = r_te_on_cut(k, xi, &m).unwrap();
                assert!((rd + rte).norm() < 1e-9, "k={k} xi={xi}: {rd} {rte}");
            }
        }
    }

    #[test]
    fn eddy_reflection_endpoint_and_domain() {
        let m = drude();
        let k = 0.2;
        let xk = eddy_branch_frequency(k, &m).unwrap();
        let rd = r_eddy(k, xk * (1.0 + 1e-9), &m).unwrap();
        assert!((rd + 1.0).norm() < 1e-3);
        assert!(matches!(r_eddy(k, 0.5 * xk, &m), Err(Error::OffCut { .. })));
        assert!(r_eddy(k, 0.09, &m).is_err());
    }

    #[test]
    fn branch_frequency_limits() {
        let m = drude();
        assert_eq!(eddy_branch_frequency(0.0, &m).unwrap(), 0.0);
        for &k in &[1e-6, 1e-4, 1e-3] {
            let ratio = eddy_branch_frequency(k, &m).unwrap() / (m.gamma() * k * k);
            assert!((ratio - 1.0).abs() < 2.0 * k * k + 1e-12, "k={k}: {ratio}");
        }
        let big = eddy_branch_frequency(1e3, &m).unwrap();
        assert!(big < m.gamma() && (m.gamma() - big) / m.gamma() < 1e-5);
    }

    #[test]
    fn bulk_roots() {
        let m = drude();
        let roots = bulk_dispersion_roots(0.3, &m).unwrap();
        let coeffs = bulk_cubic(0.3, m.gamma());
        let eddy = Complex64::new(0.0, -roots.eddy_root);
        assert!(relative_residual(&coeffs, eddy) < 1e-12);
        for r in roots.other_roots {
            assert!(relative_residual(&coeffs, r) < 1e-12);
            // Plasma-edge pair sits near ±√(1 + q²) with damping.
            assert!(r.re.abs() > 0.9 && r.im < 0.0);
        }
        assert!(bulk_dispersion_roots(0.3, &MaterialModel::plasma()).is_err());
    }

    #[test]
    fn no_upper_half_plane_zeros() {
        // Winding number of D_TE around a rectangle in Im ω > 0.
        let m = drude();
        for &(k, l) in &[(0.1, 1.0), (0.5, 0.3), (2.0, 5.0)] {
            let corners = [
                Complex64::new(-3.0, 1e-3),
                Complex64::new(3.0, 1e-3),
                Complex64::new(3.0, 3.0),
                Complex64::new(-3.0, 3.0),
            ];
            let mut winding = 0.0;
            for s in 0..4 {
                let (a, b) = (corners[s], corners[(s + 1) % 4]);
                let n = 4000;
                let mut prev = dispersion_te(k, a, l, &m).unwrap();
                for j in 1..=n {
                    let z = a + (b - a) * (j as f64 / n as f64);
                    let cur = dispersion_te(k, z, l, &m).unwrap();
                    winding += (cur / prev).arg();
                    prev = cur;
                }
            }
            assert!(winding.abs() < 1e-6, "k={k} L={l}: {winding}");
        }
    }

    proptest! {
        #[test]
        fn passivity_on_real_axis(s in 0.0f64..1.0, w in 1e-4f64..5.0) {
            // Propagating waves only: evanescent |r| may exceed one.
            let m = drude();
            let k = s * w;
            let w = Complex64::new(w, 0.0);
            prop_assert!(r_te(k, w, &m).unwrap().norm() <= 1.0 + 1e-12);
            prop_assert!(r_tm(k, w, &m).unwrap().norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn real_and_bounded_on_imaginary_axis(k in 0.0f64..5.0, xi in 1e-5f64..5.0) {
            let m = drude();
            let w = Complex64::new(0.0, xi);
            for r in [r_te(k, w, &m).unwrap(), r_tm(k, w, &m).unwrap()] {
                prop_assert!(r.im.abs() < 1e-12);
                prop_assert!(r.re.abs() < 1.0);
            }
        }

        #[test]
        fn branch_frequency_monotone_and_bounded(k in 1e-4f64..50.0, dk in 1e-3f64..1.0) {
            let m = drude();
            let a = eddy_branch_frequency(k, &m).unwrap();
            let b = eddy_branch_frequency(k + dk, &m).unwrap();
            prop_assert!(a < b && b <= m.gamma());
        }
    }
}

// Reference values worked out independently of the library code paths.

use std::f64::consts::PI;

use eddy_casimir::density::{rho_real, rho_tilde};
use eddy_casimir::lifshitz::{lifshitz_pressure, matsubara_free_energy, MirrorKind};
use eddy_casimir::numerics::special::ZETA3;
use eddy_casimir::thermo;
use eddy_casimir::{MaterialModel, QuadratureSpec};

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn zero_frequency_density_large_separation() {
    // -(2 ln 2 - 1)/(8π²D) with D = γ in these units.
    let gamma = 0.05;
    let m = MaterialModel::drude(gamma).unwrap();
    let oracle = -(2.0 * 2f64.ln() - 1.0) / (8.0 * PI * PI * gamma);
    let v = rho_real(0.0, 200.0, &m, &q()).unwrap();
    assert!((v / oracle - 1.0).abs() < 5e-3, "{v} vs {oracle}");
}

#[test]
fn perfect_reflector_high_temperature_free_energy() {
    // n = 0 Matsubara term of a perfect TE mirror pair:
    // (T/2) ∫ k dk/(2π) ln(1 - e^{-2kL}) = -ζ(3) T/(16π L²).
    let (t, l) = (5.0, 2.0);
    let f = matsubara_free_energy(t, l, &MirrorKind::PerfectReflector, &q()).unwrap();
    let oracle = -ZETA3 * t / (16.0 * PI * l * l);
    // Higher terms are O(e^{-4πTL}).
    assert!((f / oracle - 1.0).abs() < 1e-8, "{f} vs {oracle}");
}

#[test]
fn plasma_pressure_below_perfect_reflector() {
    let l = 5.0;
    let p = lifshitz_pressure(0.0, l, &MirrorKind::Plasma(MaterialModel::plasma()), &q()).unwrap();
    let ideal = PI * PI / (480.0 * l.powi(4));
    assert!(p > 0.0 && p < ideal, "{p} vs {ideal}");
}

#[test]
fn entropy_tends_to_its_high_temperature_value() {
    let m = MaterialModel::drude(0.08).unwrap();
    let l = 1.0;
    let s_inf = thermo::s_infinity(l, &m, &q()).unwrap();
    let s = thermo::entropy(1e3 * 0.08, l, &m, &q()).unwrap().value;
    assert!((s / s_inf - 1.0).abs() < 1e-3, "{s} vs {s_inf}");
}

#[test]
fn entropy_is_linear_at_low_temperature() {
    let m = MaterialModel::drude(0.08).unwrap();
    let l = 3.0;
    let xi_l = 0.08 / (l * l);
    let a = thermo::entropy(1e-4 * xi_l, l, &m, &q()).unwrap().value;
    let b = thermo::entropy(2e-4 * xi_l, l, &m, &q()).unwrap().value;
    assert!((b / a - 2.0).abs() < 0.02, "{}", b / a);
}

#[test]
fn cut_density_is_negative_inside_the_cut() {
    let m = MaterialModel::drude(0.08).unwrap();
    for xi in [1e-4, 1e-2, 0.07] {
        assert!(rho_tilde(xi, 1.0, &m, &q()).unwrap() < 0.0);
    }
    assert_eq!(rho_tilde(0.09, 1.0, &m, &q()).unwrap(), 0.0);
}

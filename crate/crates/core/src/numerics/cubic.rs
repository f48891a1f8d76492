//! Closed-form cubic roots (Cardano) with Newton polishing.

use num_complex::Complex64;

/// Roots of `a x^3 + b x^2 + c x + d` for complex coefficients.
///
/// Repeated roots are reported with multiplicity. Each Cardano root gets a
/// Newton polish, kept only while it lowers the residual.
pub fn cubic_roots(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> crate::Result<[Complex64; 3]> {
    if a.norm() == 0.0 || !a.is_finite() {
        return Err(crate::Error::InvalidParameter(
            "cubic leading coefficient must be nonzero".into(),
        ));
    }
    let (b, c, d) = (b / a, c / a, d / a);
    // x = t - b/3 gives t^3 + p t + q.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let u3 = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let cbrt_u = if u3.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        u3.powf(1.0 / 3.0)
    };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for root in roots.iter_mut() {
        let s = cbrt_u * w;
        let t = if s.norm() == 0.0 {
            s
        } else {
            s - p / (3.0 * s)
        };
        *root = t - shift;
        w *= omega;
    }
    let coeffs = [Complex64::new(1.0, 0.0), b, c, d];
    for root in roots.iter_mut() {
        *root = polish(&coeffs, *root);
    }
    Ok(roots)
}

/// Relative residual `|P(x)| / sum |a_i| |x|^i` for monic coefficients
/// `[1, b, c, d]` or general `[a, b, c, d]`.
pub fn relative_residual(coeffs: &[Complex64; 4], x: Complex64) -> f64 {
    let value = horner(coeffs, x).0;
    let r = x.norm();
    let scale = coeffs[0].norm() * r.powi(3)
        + coeffs[1].norm() * r * r
        + coeffs[2].norm() * r
        + coeffs[3].norm();
    if scale == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

fn horner(coeffs: &[Complex64; 4], x: Complex64) -> (Complex64, Complex64) {
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in &coeffs[1..] {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn polish(coeffs: &[Complex64; 4], mut x: Complex64) -> Complex64 {
    let mut best = relative_residual(coeffs, x);
    for _ in 0..4 {
        let (p, dp) = horner(coeffs, x);
        if dp.norm() == 0.0 || best == 0.0 {
            break;
        }
        let next = x - p / dp;
        let res = relative_residual(coeffs, next);
        if !(res < best) {
            break;
        }
        x = next;
        best = res;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn contains(roots: &[Complex64; 3], z: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - z).norm() < tol)
    }

    #[test]
    fn unit_roots() {
        let roots = cubic_roots(c(1.0), c(0.0), c(0.0), c(-1.0)).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(contains(&roots, c(1.0), 1e-14));
        assert!(contains(&roots, w, 1e-14));
        assert!(contains(&roots, w.conj(), 1e-14));
    }

    #[test]
    fn double_root_reported_twice() {
        // (x-2)^2 (x+1) = x^3 - 3x^2 + 4
        let roots = cubic_roots(c(1.0), c(-3.0), c(0.0), c(4.0)).unwrap();
        let near_two = roots.iter().filter(|r| (*r - c(2.0)).norm() < 1e-7).count();
        assert_eq!(near_two, 2);
        assert!(contains(&roots, c(-1.0), 1e-13));
    }

    #[test]
    fn triple_root() {
        let roots = cubic_roots(c(2.0), c(-6.0), c(6.0), c(-2.0)).unwrap();
        for r in roots {
            assert!((r - c(1.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn zero_leading_coefficient() {
        assert!(cubic_roots(c(0.0), c(1.0), c(1.0), c(1.0)).is_err());
    }

    #[test]
    fn complex_coefficients_residual() {
        let coeffs = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.08),
            Complex64::new(-1.09, 0.0),
            Complex64::new(0.0, -0.0072),
        ];
        let roots = cubic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3]).unwrap();
        for r in roots {
            assert!(relative_residual(&coeffs, r) < 1e-12);
        }
    }
}

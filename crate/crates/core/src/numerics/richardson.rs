//! Richardson extrapolation and derivative stencils built on it.

/// Limit estimate from a Richardson table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error_estimate: f64,
    /// False when the sample differences do not shrink at the rate of the
    /// assumed leading error term.
    pub reliable: bool,
}

/// Extrapolate `samples[i] = A(h / ratio^i)` to `h -> 0`.
///
/// The error is assumed to expand as `c1 h^p + c2 h^(p + dp) + ...` with
/// `p = order` and `dp = order_step`.
pub fn richardson_extrapolate(
    samples: &[f64],
    ratio: f64,
    order: u32,
    order_step: u32,
) -> crate::Result<Extrapolated> {
    if samples.len() < 3 {
        return Err(crate::Error::InvalidParameter(
            "richardson extrapolation needs at least three samples".into(),
        ));
    }
    if ratio <= 1.0 || order == 0 || order_step == 0 {
        return Err(crate::Error::InvalidParameter(
            "richardson extrapolation needs ratio > 1 and positive orders".into(),
        ));
    }
    let n = samples.len();
    let mut table = samples.to_vec();
    let mut corrections = Vec::with_capacity(n - 1);
    for col in 1..n {
        let p = order + (col as u32 - 1) * order_step;
        let factor = ratio.powi(p as i32) - 1.0;
        let mut last_correction = 0.0;
        for i in (col..n).rev() {
            let c = (table[i] - table[i - 1]) / factor;
            table[i] += c;
            if i == n - 1 {
                last_correction = c.abs();
            }
        }
        corrections.push(last_correction);
    }
    let value = table[n - 1];
    let error_estimate = *corrections.last().unwrap_or(&0.0);
    // The raw differences must shrink geometrically at roughly the rate the
    // leading error term predicts.
    let scale = value.abs().max(f64::MIN_POSITIVE);
    let expected = ratio.powi(order as i32).recip();
    let reliable = samples.windows(3).all(|w| {
        let (d0, d1) = (w[1] - w[0], w[2] - w[1]);
        if d0.abs().max(d1.abs()) <= 1e-13 * scale {
            return true;
        }
        let q = d1 / d0;
        q > 0.0 && q <= 2.0 * expected
    });
    Ok(Extrapolated {
        value,
        error_estimate,
        reliable,
    })
}

/// First derivative by central differences at steps `h`, `h/2`, `h/4`,
/// Richardson-extrapolated in `h^2`.
pub fn central_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> Extrapolated {
    let samples: Vec<f64> = (0..3)
        .map(|i| {
            let hi = h / f64::from(1u32 << i);
            (f(x + hi) - f(x - hi)) / (2.0 * hi)
        })
        .collect();
    richardson_extrapolate(&samples, 2.0, 2, 2).expect("three samples with ratio 2")
}

/// Five-point central stencil, accurate to `O(h^4)`.
pub fn five_point_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_error_series() {
        let s: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|h| 1.0 + h * h).collect();
        let r = richardson_extrapolate(&s, 2.0, 2, 2).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn first_order_error_series() {
        let s: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|h| 1.0 + h + h * h).collect();
        let r = richardson_extrapolate(&s, 2.0, 1, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.reliable);
    }

    #[test]
    fn too_few_samples() {
        assert!(richardson_extrapolate(&[1.0, 2.0], 2.0, 1, 1).is_err());
    }

    #[test]
    fn erratic_samples_are_flagged() {
        let r = richardson_extrapolate(&[1.0, 5.0, -3.0, 40.0], 2.0, 2, 2).unwrap();
        assert!(!r.reliable);
    }

    #[test]
    fn derivatives_of_exp() {
        let d = central_derivative(f64::exp, 0.3, 1e-2);
        assert!((d.value - 0.3f64.exp()).abs() < 1e-11);
        let d5 = five_point_derivative(f64::exp, 0.3, 1e-3);
        assert!((d5 - 0.3f64.exp()).abs() < 1e-11);
    }
}

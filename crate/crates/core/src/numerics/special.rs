//! Stirling remainder of the log-gamma function and its derivatives.
//!
//! `binet(x) = ln Γ(x) - (x - 1/2) ln x + x - ln(2π)/2` is the function
//! that turns a Lorentzian-weighted thermal occupation into closed form:
//!
//! ```text
//! ∫₀^∞ (dω/π) ξ/(ξ² + ω²) · T ln(1 - e^{-ω/T}) = -T · binet(ξ / 2πT)
//! ```
//!
//! Direct evaluation through `ln Γ` loses every digit for large `x`, so the
//! asymptotic Bernoulli series is used there and the recurrence
//! `Γ(x + 1) = x Γ(x)` shifts small arguments into its range.

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

const SHIFT: f64 = 12.0;

fn binet_asymptotic(x: f64) -> f64 {
    let y = 1.0 / (x * x);
    (1.0 / 12.0
        + y * (-1.0 / 360.0
            + y * (1.0 / 1260.0
                + y * (-1.0 / 1680.0
                    + y * (1.0 / 1188.0 + y * (-691.0 / 360_360.0 + y * (1.0 / 156.0)))))))
        / x
}

fn binet_d1_asymptotic(x: f64) -> f64 {
    let y = 1.0 / (x * x);
    y * (-1.0 / 12.0
        + y * (1.0 / 120.0
            + y * (-1.0 / 252.0
                + y * (1.0 / 240.0
                    + y * (-1.0 / 132.0 + y * (691.0 / 32_760.0 + y * (-1.0 / 12.0)))))))
}

fn binet_d2_asymptotic(x: f64) -> f64 {
    let y = 1.0 / (x * x);
    let series = 1.0 / 6.0
        + y * (-1.0 / 30.0
            + y * (1.0 / 42.0
                + y * (-1.0 / 30.0 + y * (5.0 / 66.0 + y * (-691.0 / 2730.0 + y * (7.0 / 6.0))))));
    y * series / x
}

fn shift_count(x: f64) -> usize {
    if x >= SHIFT {
        0
    } else {
        (SHIFT - x).ceil() as usize
    }
}

/// Stirling remainder `ln Γ(x) - (x - 1/2) ln x + x - ln(2π)/2`, `x > 0`.
pub fn binet(x: f64) -> f64 {
    let n = shift_count(x);
    if n == 0 {
        return binet_asymptotic(x);
    }
    let xn = x + n as f64;
    let logs: f64 = (0..n).map(|j| (x + j as f64).ln()).sum();
    binet_asymptotic(xn) + (xn - 0.5) * xn.ln() - (x - 0.5) * x.ln() - n as f64 - logs
}

/// `d binet / dx = ψ(x) - ln x + 1/(2x)`.
pub fn binet_d1(x: f64) -> f64 {
    let n = shift_count(x);
    if n == 0 {
        return binet_d1_asymptotic(x);
    }
    let xn = x + n as f64;
    let recip: f64 = (0..n).map(|j| 1.0 / (x + j as f64)).sum();
    // ψ(x) = ψ(x + n) - Σ 1/(x + j) and ψ(y) = binet'(y) + ln y - 1/(2y).
    binet_d1_asymptotic(xn) + (xn / x).ln() - 0.5 / xn + 0.5 / x - recip
}

/// `d² binet / dx² = ψ'(x) - 1/x - 1/(2x²)`.
pub fn binet_d2(x: f64) -> f64 {
    let n = shift_count(x);
    if n == 0 {
        return binet_d2_asymptotic(x);
    }
    let xn = x + n as f64;
    let recip2: f64 = (0..n).map(|j| (x + j as f64).powi(-2)).sum();
    binet_d2_asymptotic(xn) + 1.0 / xn + 0.5 / (xn * xn) + recip2 - 1.0 / x - 0.5 / (x * x)
}

/// Entropy carried by one branch-cut mode at `x = ξ / (2πT)` (units of k_B),
/// the exact `-∂/∂T` of the free-energy kernel: `binet(x) - x binet'(x)`.
pub fn mode_entropy(x: f64) -> f64 {
    binet(x) - x * binet_d1(x)
}

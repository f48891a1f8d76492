//! Mode densities of the eddy-current continuum.
//!
//! The branch-cut density is
//!
//! ```text
//! ρ̃(ξ; L) = -∂_ξ G(ξ; L),   G(ξ; L) = (1/π) ∫ k dk/(2π) Φ(k, ξ; L)
//! Φ = Im ln[1 - r_TE²(k, -iξ + 0) e^{-2κL}],   κ = √(k² + ξ²)
//! ```
//!
//! where the k-integral only runs over the cut, `k < k_c(ξ)`, because Φ is
//! zero elsewhere. Φ vanishes at the cut edge (`k_z → 0` makes `r = 1`), so
//! the moving edge contributes no boundary term and `∂_ξ` may act under the
//! integral. Its `1/k_z` singularity at the edge is removed by the
//! substitution `k = k_c sin θ`.
//!
//! Most thermodynamic quantities are linear functionals `∫ ρ̃ K dξ`. They
//! are evaluated after one integration by parts as `∫ G K' dξ`: G vanishes
//! at both ends of the cut (like ξ^{3/2} and √(γ - ξ)) and is much smoother
//! than ρ̃, which has an inverse square-root edge at ξ = γ.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::numerics::{
    adaptive_integrate, five_point_derivative, integrate_sqrt_lower, integrate_sqrt_upper,
    QuadResult, QuadratureSpec,
};
use crate::response::{cut_edge, kappa, kappa_m};
use crate::units::{omega2_epsilon, MaterialModel, ModelKind};
use crate::{checked, Error, Result};

/// Upper cutoff on `κL`: `e^{-2·40} ≈ 2·10⁻³⁵`.
pub const KAPPA_L_MAX: f64 = 40.0;

/// Tolerance used for the integrals that get differentiated numerically.
const DIFF_TOL: f64 = 1e-13;

/// Which frequency axis a curve is sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralAxis {
    /// Imaginary frequency ξ along the cut, density ρ̃(ξ; L).
    ImaginaryCut,
    /// Real frequency ω, density ρ(ω; L).
    RealFrequency,
}

/// Sampled mode density per unit plate area (TE polarization).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    pub axis: SpectralAxis,
    pub separation: f64,
    pub gamma: f64,
    pub samples: Vec<(f64, f64)>,
}

impl SpectralCurve {
    pub fn new(
        axis: SpectralAxis,
        separation: f64,
        gamma: f64,
        samples: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter(
                "spectral samples must have strictly increasing frequencies".into(),
            ));
        }
        if axis == SpectralAxis::ImaginaryCut
            && samples.iter().any(|&(xi, _)| !(xi > 0.0 && xi <= gamma))
        {
            return Err(Error::InvalidParameter(
                "cut samples must lie in (0, gamma]".into(),
            ));
        }
        Ok(Self {
            axis,
            separation,
            gamma,
            samples,
        })
    }

    /// CSV with a one-line header comment and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let axis = match self.axis {
            SpectralAxis::ImaginaryCut => "xi",
            SpectralAxis::RealFrequency => "omega",
        };
        let mut out = format!(
            "# axis={axis} L={:.16e} gamma={:.16e}\nfrequency,density\n",
            self.separation, self.gamma
        );
        for (f, d) in &self.samples {
            let _ = writeln!(out, "{f:.16e},{d:.16e}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty spectral CSV".into()))?;
        let field = |key: &str| -> Result<&str> {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(key))
                .ok_or_else(|| Error::Config(format!("missing {key} in header")))
        };
        let axis = match field("axis=")? {
            "xi" => SpectralAxis::ImaginaryCut,
            "omega" => SpectralAxis::RealFrequency,
            other => return Err(Error::Config(format!("unknown axis {other}"))),
        };
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number {s:?}")))
        };
        let separation = parse(field("L=")?)?;
        let gamma = parse(field("gamma=")?)?;
        let mut samples = Vec::new();
        for line in lines.skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("bad row {line:?}")))?;
            samples.push((parse(a)?, parse(b)?));
        }
        Self::new(axis, separation, gamma, samples)
    }
}

/// Tracks inner-integral errors of a nested quadrature, weighted by what
/// they contribute to the outer integrand.
#[derive(Default)]
pub(crate) struct InnerLog {
    worst: Cell<f64>,
    peak: Cell<f64>,
}

impl InnerLog {
    pub(crate) fn value(&self, r: QuadResult) -> f64 {
        self.weighted(r, 1.0)
    }

    /// Value of an inner integral that enters the outer integrand with
    /// factor `w`.
    pub(crate) fn weighted(&self, r: QuadResult, w: f64) -> f64 {
        let err = if r.error_estimate.is_nan() || !r.value.is_finite() {
            f64::INFINITY
        } else {
            r.error_estimate * w.abs()
        };
        self.worst.set(self.worst.get().max(err));
        self.peak.set(self.peak.get().max((r.value * w).abs()));
        r.value
    }

    /// Fail when some inner integral's error exceeds `limit` times the
    /// largest outer integrand value. Inner integrals that only missed a
    /// relative target where the integrand is negligible pass.
    pub(crate) fn check(&self, what: &'static str, outer: QuadResult, limit: f64) -> Result<f64> {
        let worst = self.worst.get();
        if worst > limit * self.peak.get() {
            return Err(Error::Quadrature {
                what,
                value: outer.value,
                error: worst,
            });
        }
        checked(what, outer)
    }
}

/// Geometry of the cut integral at one ξ.
#[derive(Debug, Clone, Copy)]
struct CutPoint {
    xi: f64,
    gamma: f64,
    l: f64,
    k_edge: f64,
    theta_max: f64,
}

impl CutPoint {
    fn new(xi: f64, l: f64, gamma: f64) -> Option<Self> {
        if !(xi > 0.0 && xi < gamma) {
            return None;
        }
        let k_edge = cut_edge(xi, gamma);
        let kappa_max = KAPPA_L_MAX / l;
        let k_max2 = kappa_max * kappa_max - xi * xi;
        if k_edge == 0.0 || k_max2 <= 0.0 {
            return None;
        }
        let theta_max = (k_max2.sqrt() / k_edge).min(1.0).asin();
        Some(Self {
            xi,
            gamma,
            l,
            k_edge,
            theta_max,
        })
    }

    /// (k, k_z, κ) at angle θ.
    fn waves(&self, theta: f64) -> (f64, f64, f64) {
        let (s, c) = theta.sin_cos();
        let k = self.k_edge * s;
        (k, self.k_edge * c, (k * k + self.xi * self.xi).sqrt())
    }

    /// `1 - R` and `R` for `R = r² e^{-2κL}`, `r = e^{2iφ}`, `φ = atan(k_z/κ)`,
    /// written to stay accurate when both κL and φ are small.
    fn one_minus_r(&self, kz: f64, kv: f64) -> (Complex64, Complex64) {
        let phi = kz.atan2(kv);
        let a = (-2.0 * kv * self.l).exp();
        let (s4, c4) = (4.0 * phi).sin_cos();
        let s2 = (2.0 * phi).sin();
        let r = Complex64::new(a * c4, a * s4);
        let one_minus = Complex64::new(-(-2.0 * kv * self.l).exp_m1() + 2.0 * a * s2 * s2, -a * s4);
        (one_minus, r)
    }

    /// Φ(k, ξ) times the Jacobian `k dk / dθ`.
    fn phase_integrand(&self, theta: f64) -> f64 {
        let (_, kz, kv) = self.waves(theta);
        let (one_minus, _) = self.one_minus_r(kz, kv);
        let (s, c) = theta.sin_cos();
        self.k_edge * self.k_edge * s * c * one_minus.arg()
    }

    /// `∂_L Φ = Im[2κR/(1-R)]` times the Jacobian.
    fn phase_dl_integrand(&self, theta: f64) -> f64 {
        let (_, kz, kv) = self.waves(theta);
        let (one_minus, r) = self.one_minus_r(kz, kv);
        let (s, c) = theta.sin_cos();
        self.k_edge * self.k_edge * s * c * (2.0 * kv * r / one_minus).im
    }

    /// `k ∂_ξΦ` times `dk/dθ`; the `1/k_z` edge singularity cancels against
    /// the Jacobian `k_c cos θ`.
    fn phase_dxi_integrand(&self, theta: f64) -> f64 {
        let (_, kz, kv) = self.waves(theta);
        let (one_minus, r) = self.one_minus_r(kz, kv);
        let (xi, g, l) = (self.xi, self.gamma, self.l);
        let kz_dkz = 0.5 * (g / ((g - xi) * (g - xi)) - 2.0 * xi);
        let dkappa = xi / kv;
        // k_z ∂_ξ ln r with r = e^{2i atan(k_z/κ)}.
        let kz_dlnr = Complex64::new(
            0.0,
            2.0 * (kv * kz_dkz - kz * kz * dkappa) / (kv * kv + kz * kz),
        );
        let kz_dr = r * (2.0 * kz_dlnr - 2.0 * l * kz * dkappa);
        let x = (-kz_dr / one_minus).im;
        self.k_edge * theta.sin() * x
    }

    /// Phase shift of the diffusive wave, taken from
    /// `e^{-2iδ} = [1 - (r_D*)² e^{-2κL}] / [1 - r_D² e^{-2κL}]`, times the
    /// Jacobian. Built from `r_D` in complex arithmetic, independently of
    /// [`Self::phase_integrand`].
    fn scattering_integrand(&self, theta: f64) -> f64 {
        let (_, kz, kv) = self.waves(theta);
        let rd = -Complex64::new(kv, kz) / Complex64::new(kv, -kz);
        let a = (-2.0 * kv * self.l).exp();
        let ratio = (1.0 - rd.conj() * rd.conj() * a) / (1.0 - rd * rd * a);
        let delta = -0.5 * ratio.arg();
        let (s, c) = theta.sin_cos();
        self.k_edge * self.k_edge * s * c * delta
    }
}

const NORM: f64 = 1.0 / (2.0 * PI * PI);

fn integrate_theta<F: Fn(&CutPoint, f64) -> f64>(
    p: &CutPoint,
    f: F,
    spec: &QuadratureSpec,
) -> QuadResult {
    adaptive_integrate(|t| f(p, t), 0.0, p.theta_max, spec).scale(NORM)
}

/// `G(ξ; L) = (1/π) ∫ k dk/(2π) Φ`, the integrated phase along the cut.
pub fn cut_phase(xi: f64, l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    let gamma = m.require_drude("branch-cut mode density")?;
    Ok(match CutPoint::new(xi, l, gamma) {
        None => 0.0,
        Some(p) => checked(
            "cut phase",
            integrate_theta(&p, CutPoint::phase_integrand, &quad.relative()),
        )?,
    })
}

pub(crate) fn cut_phase_raw(xi: f64, l: f64, gamma: f64, spec: &QuadratureSpec) -> QuadResult {
    match CutPoint::new(xi, l, gamma) {
        None => QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        },
        Some(p) => integrate_theta(&p, CutPoint::phase_integrand, spec),
    }
}

/// `∂G/∂L` at fixed ξ.
pub(crate) fn cut_phase_dl_raw(xi: f64, l: f64, gamma: f64, spec: &QuadratureSpec) -> QuadResult {
    match CutPoint::new(xi, l, gamma) {
        None => QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        },
        Some(p) => integrate_theta(&p, CutPoint::phase_dl_integrand, spec),
    }
}

fn validate_l(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "separation must be positive, got {l}"
        )));
    }
    Ok(())
}

/// Branch-cut mode density ρ̃(ξ; L), with the ξ-derivative taken
/// analytically under the k-integral.
pub fn rho_tilde(xi: f64, l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    validate_l(l)?;
    let gamma = m.require_drude("branch-cut mode density")?;
    let Some(p) = CutPoint::new(xi, l, gamma) else {
        return Ok(0.0);
    };
    let r = integrate_theta(&p, CutPoint::phase_dxi_integrand, &quad.relative());
    Ok(-checked("rho_tilde k-integral", r)?)
}

/// Integrated scattering phase `(1/π) ∫ k dk/(2π) δ(k, ξ)`.
pub fn scattering_phase(xi: f64, l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    let gamma = m.require_drude("scattering phase")?;
    Ok(match CutPoint::new(xi, l, gamma) {
        None => 0.0,
        Some(p) => checked(
            "scattering phase",
            integrate_theta(&p, CutPoint::scattering_integrand, &quad.relative()),
        )?,
    })
}

/// ρ̃(ξ; L) from the phase shift of the diffusive waves: the k-integrated
/// phase is differentiated in ξ with a five-point stencil.
pub fn rho_tilde_scattering(
    xi: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_l(l)?;
    let gamma = m.require_drude("branch-cut mode density")?;
    if !(xi > 0.0 && xi < gamma) {
        return Ok(0.0);
    }
    let h = 1e-4 * xi.min(gamma - xi);
    let spec = QuadratureSpec {
        rel_tol: DIFF_TOL,
        abs_tol: 0.0,
        max_refinements: quad.max_refinements.max(4000),
        ..*quad
    };
    let mut failure = None;
    let d = five_point_derivative(
        |x| match scattering_phase(x, l, m, &spec) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        xi,
        h,
    );
    if let Some(e) = failure {
        // The tight tolerance is a roundoff floor for some integrands;
        // accept when the loss is mild.
        if let Error::Quadrature { value, error, .. } = e {
            if error > 1e-11 * value.abs() {
                return Err(e);
            }
        } else {
            return Err(e);
        }
        let d = five_point_derivative(
            |x| {
                CutPoint::new(x, l, gamma)
                    .map(|p| integrate_theta(&p, CutPoint::scattering_integrand, &spec).value)
                    .unwrap_or(0.0)
            },
            xi,
            h,
        );
        return Ok(-d);
    }
    Ok(-d)
}

/// Panelled integration over `[0, support]`.
///
/// Panels are geometric in ξ, with extra breakpoints at the caller's
/// characteristic scales, down to `10⁻⁴` of the smallest scale. The first
/// panel uses `ξ = a s²` (integrands up to ξ^{-1/2}); with `singular_top`
/// the last panel uses `ξ = b - a s²` for an inverse square-root edge.
pub(crate) fn integrate_panels<F: FnMut(f64) -> f64>(
    support: f64,
    singular_top: bool,
    scales: &[f64],
    mut f: F,
    spec: &QuadratureSpec,
) -> QuadResult {
    let mut floor = support;
    for &s in scales {
        if s > 0.0 && s < floor {
            floor = s;
        }
    }
    floor *= 1e-4;
    let mut points = vec![support];
    let mut p = support;
    while p > floor {
        p *= 0.1;
        points.push(p);
    }
    for &s in scales {
        if s > floor && s < support {
            points.push(s);
        }
    }
    if singular_top {
        points.push(0.5 * support);
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let mut total = integrate_sqrt_lower(&mut f, 0.0, points[0], spec);
    let n = points.len();
    for i in 0..n - 1 {
        let (a, b) = (points[i], points[i + 1]);
        let r = if i == n - 2 && singular_top {
            integrate_sqrt_upper(&mut f, a, b, spec)
        } else {
            adaptive_integrate(&mut f, a, b, spec)
        };
        total = total.merge(r);
    }
    total
}

/// Panelled integration over the cut `0 < ξ < γ`, truncated where
/// `e^{-2κL}` has underflowed.
pub(crate) fn integrate_cut<F: FnMut(f64) -> f64>(
    gamma: f64,
    l: f64,
    scales: &[f64],
    f: F,
    spec: &QuadratureSpec,
) -> QuadResult {
    let support = (KAPPA_L_MAX / l).min(gamma);
    let mut all = scales.to_vec();
    all.push(gamma / (l * l));
    integrate_panels(support, support >= gamma, &all, f, spec)
}

/// ∫ G(ξ) w(ξ) dξ for a weight given in closed form.
pub(crate) fn integrate_phase_weighted<W: Fn(f64) -> f64>(
    l: f64,
    gamma: f64,
    scales: &[f64],
    weight: W,
    derivative_in_l: bool,
    quad: &QuadratureSpec,
    what: &'static str,
) -> Result<f64> {
    let outer = quad.relative();
    let inner = quad.inner();
    let log = InnerLog::default();
    let r = integrate_cut(
        gamma,
        l,
        scales,
        |xi| {
            let w = weight(xi);
            if w == 0.0 {
                return 0.0;
            }
            let g = if derivative_in_l {
                cut_phase_dl_raw(xi, l, gamma, &inner)
            } else {
                cut_phase_raw(xi, l, gamma, &inner)
            };
            log.weighted(g, w) * w
        },
        &outer,
    );
    log.check(what, r, 1e3 * inner.rel_tol.max(1e-12))
}

/// Real-frequency eddy DOS from the Kramers-Kronig-like transform
/// `ρ(ω; L) = ∫₀^γ (dξ/π) ρ̃(ξ; L) ξ/(ξ² + ω²)`, evaluated by parts as
/// `(1/π) ∫ G(ξ) (ω² - ξ²)/(ξ² + ω²)² dξ`.
pub fn rho_real(omega: f64, l: f64, m: &MaterialModel, quad: &QuadratureSpec) -> Result<f64> {
    validate_l(l)?;
    if !(omega >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequency must be non-negative, got {omega}"
        )));
    }
    let gamma = m.require_drude("eddy DOS")?;
    let w2 = omega * omega;
    let v = integrate_phase_weighted(
        l,
        gamma,
        &[omega],
        |xi| {
            let s = xi * xi + w2;
            (w2 - xi * xi) / (s * s)
        },
        false,
        quad,
        "rho_real",
    )?;
    Ok(v / PI)
}

/// The same transform evaluated directly on ρ̃ (no integration by parts).
/// Slower; kept as an independent route.
pub fn rho_real_from_rho_tilde(
    omega: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_l(l)?;
    let gamma = m.require_drude("eddy DOS")?;
    let inner = quad.inner();
    let log = InnerLog::default();
    let r = integrate_cut(
        gamma,
        l,
        &[omega],
        |xi| match CutPoint::new(xi, l, gamma) {
            None => 0.0,
            Some(p) => {
                let w = xi / (xi * xi + omega * omega);
                -log.weighted(
                    integrate_theta(&p, CutPoint::phase_dxi_integrand, &inner),
                    w,
                ) * w
            }
        },
        &quad.relative(),
    );
    Ok(log.check("rho_real (direct)", r, 1e-6)? / PI)
}

/// Zero-frequency limit of the eddy DOS, `-(2 ln 2 - 1)/(8π² D)`.
pub fn rho_zero_limit(m: &MaterialModel) -> Result<f64> {
    let d = crate::units::diffusion_coefficient(m)?;
    Ok(-(2.0 * 2f64.ln() - 1.0) / (8.0 * PI * PI * d))
}

fn exp_m1(z: Complex64) -> Complex64 {
    let (sin, cos) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * cos - 2.0 * half * half, z.re.exp() * sin)
}

/// Per-k integrand of the full TE density `-(1/π) ∂_ω Im ln D`, already
/// multiplied by `k/(2π)`; `kv` is κ at this (k, ω).
fn full_dos_integrand(k: f64, kv: Complex64, omega: Complex64, l: f64, m: &MaterialModel) -> f64 {
    let km = match kappa_m(k, omega, m) {
        Ok(v) => v,
        Err(_) => return f64::NAN,
    };
    let d_w2eps = match m.kind() {
        ModelKind::Plasma => 2.0 * omega,
        ModelKind::Drude => {
            let s = omega + Complex64::new(0.0, m.gamma());
            2.0 * omega - Complex64::new(0.0, m.gamma()) / (s * s)
        }
    };
    let dkv = -omega / kv;
    let dkm = -d_w2eps / (2.0 * km);
    let sum = kv + km;
    let r = (kv - km) / sum;
    let dr = 2.0 * (dkv * km - kv * dkm) / (sum * sum);
    let e = (-2.0 * kv * l).exp();
    // 1 - r² e^{-2κL} without cancellation as κ → 0, where r → -1.
    let one_minus = -exp_m1(-2.0 * kv * l) + e * 4.0 * kv * km / (sum * sum);
    let d_big_r = e * (2.0 * r * dr - 2.0 * l * dkv * r * r);
    let dlog = -d_big_r / one_minus;
    -dlog.im * k / (2.0 * PI * PI)
}

/// Full TE Lifshitz mode density at real frequency,
/// `ρ(ω; L) = -(1/π) ∂_ω Im ∫ d²k/(2π)² ln D_TE(k, ω + i0)`.
///
/// The Drude model has no real-axis singularities, so `ω + i0` is
/// evaluated at `ω` itself with the derivative taken analytically. The
/// lossless plasma model is evaluated at `ω + iδ` for three shrinking δ and
/// Richardson-extrapolated.
pub fn rho_lifshitz_real(
    omega: f64,
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_l(l)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    match m.kind() {
        ModelKind::Drude => full_dos_at(Complex64::new(omega, 0.0), l, m, &quad.relative()),
        ModelKind::Plasma => {
            let delta = 1e-6 * omega;
            let mut s = [0.0; 3];
            for (i, v) in s.iter_mut().enumerate() {
                let d = delta / f64::from(1u32 << i);
                *v = full_dos_at(Complex64::new(omega, d), l, m, &quad.relative())?;
            }
            Ok(crate::numerics::richardson_extrapolate(&s, 2.0, 1, 1)?.value)
        }
    }
}

pub(crate) fn full_dos_at(
    omega: Complex64,
    l: f64,
    m: &MaterialModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let spec = *spec;
    let w = omega.re;
    let exact_axis = omega.im == 0.0;
    // Propagating part, k = ω sin θ.
    let mut prop = adaptive_integrate(
        |t| {
            let (s, c) = t.sin_cos();
            let k = w * s;
            let kv = if exact_axis {
                Complex64::new(0.0, -w * c)
            } else {
                kappa(k, omega)
            };
            let jac = w * c;
            let f = full_dos_integrand(k, kv, omega, l, m);
            f * jac
        },
        0.0,
        0.5 * PI,
        &spec,
    );
    // Evanescent part, κ = p, with breakpoints at the vacuum decay scale and
    // the skin depth.
    let p_max = KAPPA_L_MAX / l;
    let skin = (omega2_epsilon(omega, m) - omega * omega).norm().sqrt();
    let evan = integrate_panels(
        p_max,
        false,
        &[1.0 / l, skin],
        |p| {
            let k = (w * w + p * p).sqrt();
            let kv = if exact_axis {
                Complex64::new(p, 0.0)
            } else {
                kappa(k, omega)
            };
            let f = full_dos_integrand(k, kv, omega, l, m);
            // k dk = p dp.
            f * p / k
        },
        &spec,
    );
    if exact_axis {
        // At k = ω the dispersion function vanishes for every L (κ = 0 makes
        // r = -1), and arg D jumps by π/2 across it. The jump moves with ω
        // and adds ω/(4π) to the density; off the axis it is the narrow
        // peak of width δ that the integrals resolve themselves.
        let jump = QuadResult {
            value: w / (4.0 * PI),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
        prop = prop.merge(jump);
    }
    // Judge convergence on the sum, against the size of the separate
    // pieces: near sign changes of ρ they cancel and neither the total nor
    // the tiny propagating part at low frequency can meet a relative target.
    let size = prop.value.abs() + evan.value.abs() + if exact_axis { w / (4.0 * PI) } else { 0.0 };
    let mut total = prop.merge(evan);
    total.converged = total.error_estimate <= spec.abs_tol.max(spec.rel_tol * size);
    checked("full TE density", total)
}

/// ρ̃ sampled on a list of ξ values.
pub fn rho_tilde_curve(
    xis: &[f64],
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<SpectralCurve> {
    use rayon::prelude::*;
    let samples: Result<Vec<(f64, f64)>> = xis
        .par_iter()
        .map(|&xi| Ok((xi, rho_tilde(xi, l, m, quad)?)))
        .collect();
    SpectralCurve::new(SpectralAxis::ImaginaryCut, l, m.gamma(), samples?)
}

/// ρ sampled on a list of real frequencies.
pub fn rho_real_curve(
    omegas: &[f64],
    l: f64,
    m: &MaterialModel,
    quad: &QuadratureSpec,
) -> Result<SpectralCurve> {
    use rayon::prelude::*;
    let samples: Result<Vec<(f64, f64)>> = omegas
        .par_iter()
        .map(|&w| Ok((w, rho_real(w, l, m, quad)?)))
        .collect();
    SpectralCurve::new(SpectralAxis::RealFrequency, l, m.gamma(), samples?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drude() -> MaterialModel {
        MaterialModel::drude(0.08).unwrap()
    }

    fn tight() -> QuadratureSpec {
        QuadratureSpec::default().with_rel_tol(1e-10)
    }

    #[test]
    fn vanishes_off_the_cut() {
        let m = drude();
        assert_eq!(rho_tilde(0.08, 1.0, &m, &tight()).unwrap(), 0.0);
        assert_eq!(rho_tilde(0.5, 1.0, &m, &tight()).unwrap(), 0.0);
        assert_eq!(rho_tilde_scattering(0.1, 1.0, &m, &tight()).unwrap(), 0.0);
    }

    #[test]
    fn decoupled_plates() {
        let m = drude();
        let v = rho_tilde(0.04, 1e3, &m, &tight()).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn plasma_has_no_cut() {
        assert!(rho_tilde(0.01, 1.0, &MaterialModel::plasma(), &tight()).is_err());
        assert!(rho_zero_limit(&MaterialModel::plasma()).is_err());
    }

    #[test]
    fn zero_limit_values() {
        let one = rho_zero_limit(&MaterialModel::drude(0.999_999_999).unwrap()).unwrap();
        assert!((one / -4.8925e-3 - 1.0).abs() < 1e-4);
        let a = rho_zero_limit(&drude()).unwrap();
        let b = rho_zero_limit(&MaterialModel::drude(1e-3).unwrap()).unwrap();
        assert!((b / a - 80.0).abs() < 1e-10);
    }

    #[test]
    fn scattering_integrand_vanishes_below_branch_point() {
        let m = drude();
        let k = 0.3;
        let xk = crate::response::eddy_branch_frequency(k, &m).unwrap();
        // No cut point exists with k beyond the edge at this ξ.
        assert!(cut_edge(0.9 * xk, m.gamma()) < k);
    }

    #[test]
    fn analytic_and_stencil_derivatives_agree() {
        let m = drude();
        for &(xi, l) in &[(1e-3, 1.0), (0.02, 0.5), (0.07, 3.0), (1e-4, 10.0)] {
            let a = rho_tilde(xi, l, &m, &tight()).unwrap();
            let b = rho_tilde_scattering(xi, l, &m, &tight()).unwrap();
            assert!((a - b).abs() <= 1e-6 * a.abs(), "xi={xi} L={l}: {a} vs {b}");
        }
    }

    #[test]
    fn kk_transform_routes_agree() {
        let m = drude();
        let spec = QuadratureSpec::default().with_rel_tol(1e-8);
        for &w in &[0.0, 1e-3, 0.03] {
            let a = rho_real(w, 3.0, &m, &spec).unwrap();
            let b = rho_real_from_rho_tilde(w, 3.0, &m, &spec).unwrap();
            assert!((a - b).abs() < 1e-6 * a.abs(), "w={w}: {a} vs {b}");
        }
    }

    #[test]
    fn high_frequency_decay() {
        let m = drude();
        let spec = QuadratureSpec::default();
        let a = rho_real(1.0, 3.0, &m, &spec).unwrap();
        let b = rho_real(10.0, 3.0, &m, &spec).unwrap();
        // O(1/ω²) tail.
        assert!((a / b / 100.0 - 1.0).abs() < 1e-2, "{a} {b}");
    }

    #[test]
    fn full_density_matches_phase_derivative() {
        // Finite difference of Im ∫ k dk/(2π) ln D, including the jump of
        // arg D at the light cone.
        let m = drude();
        let l = 10.0;
        let q = QuadratureSpec::default().with_rel_tol(1e-11).relative();
        let phase = |w: f64| {
            let g = |k: f64| {
                let d = crate::response::dispersion_te(k, Complex64::new(w, 0.0), l, &m).unwrap();
                k / (2.0 * PI) * d.arg()
            };
            integrate_sqrt_upper(g, 0.0, w, &q).value
                + integrate_sqrt_lower(g, w, w + 4.0, &q).value
        };
        for w in [0.003, 0.03, 0.6] {
            let h = 1e-5 * w;
            let fd = -(phase(w + h) - phase(w - h)) / (2.0 * h) / PI;
            let a = rho_lifshitz_real(w, l, &m, &QuadratureSpec::default()).unwrap();
            assert!(
                (a - fd).abs() < 1e-6 * a.abs().max(1e-3),
                "w={w}: {a} vs {fd}"
            );
        }
    }

    #[test]
    fn full_density_off_axis_limit() {
        let m = drude();
        let (w, l) = (0.2, 5.0);
        let q = QuadratureSpec::default().relative();
        let s: Vec<f64> = (0..3)
            .map(|i| {
                let d = 1e-3 * w / f64::from(1u32 << i);
                full_dos_at(Complex64::new(w, d), l, &m, &q).unwrap()
            })
            .collect();
        let lim = crate::numerics::richardson_extrapolate(&s, 2.0, 1, 1)
            .unwrap()
            .value;
        let a = rho_lifshitz_real(w, l, &m, &QuadratureSpec::default()).unwrap();
        assert!((lim / a - 1.0).abs() < 1e-5, "{lim} vs {a}");
    }

    #[test]
    fn csv_round_trip() {
        let c = SpectralCurve::new(
            SpectralAxis::RealFrequency,
            2.5,
            0.08,
            vec![(0.1, -1.0 / 3.0), (0.2, 2.0e-17)],
        )
        .unwrap();
        let text = c.to_csv();
        assert!(text.starts_with("# axis=omega L="));
        assert_eq!(SpectralCurve::from_csv(&text).unwrap(), c);
    }

    #[test]
    fn curve_invariants() {
        assert!(SpectralCurve::new(
            SpectralAxis::RealFrequency,
            1.0,
            0.08,
            vec![(0.2, 0.0), (0.1, 0.0)]
        )
        .is_err());
        assert!(
            SpectralCurve::new(SpectralAxis::ImaginaryCut, 1.0, 0.08, vec![(0.1, 0.0)]).is_err()
        );
    }
}

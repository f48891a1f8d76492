//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! Every integral in the crate goes through [`adaptive_integrate`] or one of
//! its range-mapping wrappers, so error accounting is uniform. The scheme is
//! the classic QUADPACK `qag` strategy with a 21-point Kronrod rule: keep a
//! pool of subintervals, always bisect the one with the largest error
//! estimate, stop when the summed error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Tolerances and limits shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections per integral.
    pub max_refinements: usize,
    /// Relative step used for numerical derivatives in `L` and `T`.
    pub diff_step: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_refinements: 2000,
            diff_step: 1e-3,
        }
    }
}

impl QuadratureSpec {
    /// Faster setting used for figure reproduction.
    pub fn figure() -> Self {
        Self {
            rel_tol: 1e-6,
            ..Self::default()
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    /// Same spec with the absolute floor removed. Physical quantities span
    /// many decades (per-area densities at large separation are ~1e-12), so
    /// the physics layer works with relative tolerances only.
    pub fn relative(self) -> Self {
        Self {
            abs_tol: 0.0,
            ..self
        }
    }

    /// Tighter spec for an integral nested inside another one.
    pub fn inner(self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 1e-2).max(1e-14),
            abs_tol: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(crate::Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) || self.max_refinements == 0 {
            return Err(crate::Error::InvalidParameter(
                "abs_tol must be >= 0 and max_refinements > 0".into(),
            ));
        }
        if !(self.diff_step > 0.0 && self.diff_step < 0.1) {
            return Err(crate::Error::InvalidParameter(format!(
                "diff_step must lie in (0, 0.1), got {}",
                self.diff_step
            )));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of one adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Combine results of integrals over adjacent panels.
    pub fn merge(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

impl std::iter::Sum for QuadResult {
    fn sum<I: Iterator<Item = QuadResult>>(iter: I) -> Self {
        iter.fold(QuadResult::zero(), QuadResult::merge)
    }
}

// Kronrod abscissae for the 21-point rule (QUADPACK qk21), positive half.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights, matched to the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Integrate `f` over the finite interval `[a, b]`.
///
/// Non-finite integrand values abort refinement and are reported through
/// `converged = false` rather than silently propagated.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    let (value, error) = kronrod21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut refinements = 0;
    // Intervals whose width has hit the floating-point resolution; their
    // error cannot be reduced further.
    let mut frozen_err = 0.0;
    let mut frozen_val = 0.0;

    loop {
        if !total.is_finite() {
            return QuadResult {
                value: total,
                error_estimate: f64::INFINITY,
                evaluations,
                converged: false,
            };
        }
        if total_err <= spec.target(total) {
            return QuadResult {
                value: total,
                error_estimate: total_err,
                evaluations,
                converged: true,
            };
        }
        if refinements >= spec.max_refinements {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b || (seg.b - seg.a).abs() < 1e-15 * mid.abs() {
            frozen_err += seg.error;
            frozen_val += seg.value;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = kronrod21(&mut f, seg.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, seg.b);
        evaluations += 42;
        refinements += 1;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        if refinements % 64 == 0 {
            // Re-sum to stop drift from the running updates.
            total = heap.iter().map(|s| s.value).sum::<f64>() + frozen_val;
            total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
        }
    }
    total = heap.iter().map(|s| s.value).sum::<f64>() + frozen_val;
    total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    QuadResult {
        value: total,
        error_estimate: total_err,
        evaluations,
        converged: total_err <= spec.target(total),
    }
}

/// Integrate over `[a, inf)` with the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    adaptive_integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            if x.is_infinite() {
                0.0
            } else {
                f(x) / (s * s)
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Integrate over `[a, b]` where the integrand behaves like `(x - a)^(-1/2)`
/// near `a`; the substitution `x = a + (b - a) s^2` removes the singularity.
pub fn integrate_sqrt_lower<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    let w = b - a;
    adaptive_integrate(|s| 2.0 * w * s * f(a + w * s * s), 0.0, 1.0, spec)
}

/// Mirror image of [`integrate_sqrt_lower`] for a singular upper endpoint.
pub fn integrate_sqrt_upper<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    let w = b - a;
    adaptive_integrate(|s| 2.0 * w * s * f(b - w * s * s), 0.0, 1.0, spec)
}

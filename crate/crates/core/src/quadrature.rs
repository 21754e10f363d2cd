//! Adaptive Gauss–Kronrod (G10/K21) integration and uniform-grid rules.
//!
//! The integrator is generic over the integrand's value so the same code
//! path serves real integrals (phase integrals, moments) and complex ones
//! (the Wigner transform).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    /// Sum of |K21 - G10| over the final partition.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn gauss_kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Segment<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` by globally adaptive bisection of the
/// segment with the largest error estimate.
///
/// Returns the best estimate even when the tolerance is not reached; the
/// caller decides what to do with `error`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, cfg: QuadConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return QuadResult {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        };
    }
    let mut segments = vec![gauss_kronrod(&f, a, b)];
    let mut evaluations = 21;
    loop {
        let (value, error) = segments
            .iter()
            .fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
        let target = cfg.abs_tol.max(cfg.rel_tol * value.magnitude());
        if error <= target || segments.len() >= cfg.max_intervals {
            return QuadResult {
                value,
                error,
                evaluations,
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval exhausted at machine precision
            segments.push(seg);
            let (value, error) = segments
                .iter()
                .fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
            return QuadResult {
                value,
                error,
                evaluations,
            };
        }
        segments.push(gauss_kronrod(&f, seg.a, mid));
        segments.push(gauss_kronrod(&f, mid, seg.b));
        evaluations += 42;
    }
}

/// Like [`integrate`] but fails when the error estimate exceeds `required`.
pub fn integrate_checked<T, F>(
    f: F,
    a: f64,
    b: f64,
    cfg: QuadConfig,
    required: f64,
    context: &str,
) -> Result<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let r = integrate(f, a, b, cfg);
    if r.error > required {
        return Err(Error::Accuracy {
            estimate: r.error,
            tolerance: required,
            context: context.to_string(),
        });
    }
    Ok(r.value)
}

/// Composite trapezoid rule over uniformly spaced samples.
pub fn trapezoid<T: QuadValue>(samples: &[T], spacing: f64) -> T {
    match samples.len() {
        0 | 1 => T::zero(),
        n => {
            let interior = samples[1..n - 1].iter().fold(T::zero(), |acc, &v| acc + v);
            (interior + (samples[0] + samples[n - 1]) * 0.5) * spacing
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x: f64| x.powi(5) - 2.0 * x * x,
            0.0,
            2.0,
            QuadConfig::default(),
        );
        let exact = 64.0 / 6.0 - 16.0 / 3.0;
        assert!((r.value - exact).abs() < 1e-13);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, QuadConfig::default());
        assert!((r.value - PI.sqrt()).abs() < 1e-13, "{}", r.value);
    }

    #[test]
    fn peaked_integrand_converges() {
        // ∫ dx / (1 + (100 x)^2) over [-1, 1] = atan(100)/50
        let r = integrate(
            |x: f64| 1.0 / (1.0 + (100.0 * x).powi(2)),
            -1.0,
            1.0,
            QuadConfig::default(),
        );
        assert!((r.value - 100f64.atan() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn complex_oscillatory() {
        // ∫ e^{-x²} e^{i k x} dx = √π e^{-k²/4}
        let k = 3.0;
        let r = integrate(
            |x: f64| Complex64::new(0.0, k * x).exp() * (-x * x).exp(),
            -12.0,
            12.0,
            QuadConfig::default(),
        );
        assert!((r.value.re - PI.sqrt() * (-k * k / 4.0).exp()).abs() < 1e-13);
        assert!(r.value.im.abs() < 1e-13);
    }

    #[test]
    fn checked_reports_accuracy_failure() {
        let cfg = QuadConfig {
            max_intervals: 1,
            ..QuadConfig::default()
        };
        let err = integrate_checked(
            |x: f64| (50.0 * x).sin().abs(),
            0.0,
            3.0,
            cfg,
            1e-10,
            "test",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn trapezoid_linear_exact() {
        let xs: Vec<f64> = (0..11).map(|i| 1.0 + 0.5 * i as f64).collect();
        assert!((trapezoid(&xs, 0.1) - 3.5).abs() < 1e-14);
        assert_eq!(trapezoid::<f64>(&[], 1.0), 0.0);
    }
}

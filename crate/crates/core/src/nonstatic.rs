//! The auxiliary function `f(t)`, its phase integral, the classical motion
//! and the time-evolving coherent amplitude `A(t)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Classification of an instant by the behaviour of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Generic,
    /// `f` at a local minimum: the packet is narrowest.
    Node,
    /// `f` at a local maximum: the packet is widest.
    Belly,
}

impl SampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleKind::Generic => "generic",
            SampleKind::Node => "node",
            SampleKind::Belly => "belly",
        }
    }
}

/// `f`, its derivatives and the derived quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonstaticSample {
    pub t: f64,
    pub f: f64,
    pub fdot: f64,
    pub fddot: f64,
    /// `ζ = εω / (ħ f)`.
    pub zeta: f64,
    /// `T(t) = ∫_{t0}^{t} dt'/f(t')`, signed for `t < t0`.
    pub phase_integral: f64,
    pub kind: SampleKind,
}

/// Closed-form `f`, `ḟ` and `f̈` at time `t`.
pub(crate) fn f_derivatives(p: &ModelParams, t: f64) -> (f64, f64, f64) {
    let x = p.phase_arg(t);
    let c3 = p.c3();
    let (s, c) = x.sin_cos();
    let (s2, c2) = (2.0 * x).sin_cos();
    let f = p.c1 * s * s + p.c2 * c * c + c3 * s2;
    let fdot = p.omega * ((p.c1 - p.c2) * s2 + 2.0 * c3 * c2);
    let fddot = 2.0 * p.omega * p.omega * ((p.c1 - p.c2) * c2 - 2.0 * c3 * s2);
    (f, fdot, fddot)
}

/// Amplitude `R` of `ḟ = ωR sin(2φ̃ + β)`; zero only in the static case.
fn fdot_amplitude(p: &ModelParams) -> f64 {
    (p.c1 - p.c2).hypot(2.0 * p.c3())
}

/// Continuous antiderivative of `1/f` with respect to the phase argument.
///
/// `atan(c3 + c1 tan x)` jumps by `-π` at every pole of `tan`. The angle of
/// `(cos x, c1 sin x + c3 cos x)` has the same tangent but winds
/// continuously; its offset from `x` never reaches `±π` because the map
/// `[[1, 0], [c3, c1]]` has positive eigenvalues, so wrapping that offset
/// into `(-π, π]` yields a continuous branch.
fn unwrapped_antiderivative(p: &ModelParams, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let angle = (p.c1 * s + p.c3() * c).atan2(c);
    let offset = (angle - x + PI).rem_euclid(2.0 * PI) - PI;
    x + offset
}

fn signed_phase_integral(p: &ModelParams, t: f64) -> f64 {
    if p.is_static() {
        return t - p.t0;
    }
    (unwrapped_antiderivative(p, p.phase_arg(t)) - unwrapped_antiderivative(p, p.phi)) / p.omega
}

/// Evaluates `f(t)` and everything derived from it at one instant.
pub fn eval_f(params: &ModelParams, t: f64) -> Result<NonstaticSample> {
    params.validate()?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    Ok(sample_unchecked(params, t))
}

fn sample_unchecked(p: &ModelParams, t: f64) -> NonstaticSample {
    let (f, fdot, fddot) = f_derivatives(p, t);
    let r = fdot_amplitude(p);
    let kind = if r > 0.0 && fdot.abs() <= 1e-12 * p.omega * (p.c1 + p.c2) {
        if fddot > 0.0 {
            SampleKind::Node
        } else {
            SampleKind::Belly
        }
    } else {
        SampleKind::Generic
    };
    NonstaticSample {
        t,
        f,
        fdot,
        fddot,
        zeta: p.epsilon * p.omega / (p.hbar * f),
        phase_integral: signed_phase_integral(p, t),
        kind,
    }
}

/// Evaluates [`eval_f`] over many times, in parallel, preserving order.
pub fn sample_series(params: &ModelParams, times: &[f64]) -> Result<Vec<NonstaticSample>> {
    params.validate()?;
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    Ok(times
        .par_iter()
        .map(|&t| sample_unchecked(params, t))
        .collect())
}

/// Measure of nonstaticity `D = √((c1 + c2)² - 4) / (2√2)`.
pub fn nonstaticity_measure(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let s = params.c1 + params.c2;
    Ok((s * s - 4.0).max(0.0).sqrt() / (2.0 * 2f64.sqrt()))
}

/// `T(t) = ∫_{t0}^{t} dt'/f(t')` on the continuous branch of the arctangent.
pub fn phase_integral(params: &ModelParams, t: f64) -> Result<f64> {
    params.validate()?;
    if !(t >= params.t0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "phase integral needs t >= t0 = {}, got {t}",
            params.t0
        )));
    }
    Ok(signed_phase_integral(params, t))
}

/// The eigenvalue `A(t)` of the generalised annihilation operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude {
    pub t: f64,
    /// Time-constant modulus `A0`.
    pub a0: f64,
    /// Phase `θ` with `A(t0) = A0 e^{-iθ}`.
    pub theta: f64,
    pub value: Complex64,
}

impl CoherentAmplitude {
    /// Phase `κ = -(ωT + θ)`, continuous in time.
    pub fn kappa(&self, params: &ModelParams) -> f64 {
        -(params.omega * signed_phase_integral(params, self.t) + self.theta)
    }
}

/// `A(t) = A0 e^{-iθ} e^{-iωT(t)}`.
pub fn amplitude(params: &ModelParams, a0: f64, theta: f64, t: f64) -> Result<CoherentAmplitude> {
    if !(a0 >= 0.0) || !a0.is_finite() {
        return Err(Error::Domain(format!(
            "amplitude A0 must be >= 0, got {a0}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!(
            "phase θ must be finite, got {theta}"
        )));
    }
    let big_t = phase_integral(params, t)?;
    Ok(CoherentAmplitude {
        t,
        a0,
        theta,
        value: Complex64::from_polar(a0, -(theta + params.omega * big_t)),
    })
}

/// Evaluates [`amplitude`] over many times, in parallel, preserving order.
pub fn amplitude_series(
    params: &ModelParams,
    a0: f64,
    theta: f64,
    times: &[f64],
) -> Result<Vec<CoherentAmplitude>> {
    times
        .par_iter()
        .map(|&t| amplitude(params, a0, theta, t))
        .collect()
}

/// Classical solution `Qcl = Q0 cos(ω(t - t0) + θ0)`, `Pcl = ε dQcl/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub q0: f64,
    pub theta0: f64,
}

impl ClassicalState {
    pub fn new(q0: f64, theta0: f64) -> Self {
        ClassicalState { q0, theta0 }
    }

    fn angle(&self, p: &ModelParams, t: f64) -> f64 {
        p.omega * (t - p.t0) + self.theta0
    }

    pub fn displacement(&self, p: &ModelParams, t: f64) -> f64 {
        self.q0 * self.angle(p, t).cos()
    }

    pub fn momentum(&self, p: &ModelParams, t: f64) -> f64 {
        -p.epsilon * p.omega * self.q0 * self.angle(p, t).sin()
    }

    /// `A0 = √(εω f(t1) / 2ħ) |Q0|` with `t1 = t0 + (π/2 - θ0)/ω`.
    pub fn invariant_amplitude(&self, p: &ModelParams) -> f64 {
        let t1 = p.t0 + (FRAC_PI_2 - self.theta0) / p.omega;
        let (f1, _, _) = f_derivatives(p, t1);
        (p.epsilon * p.omega * f1 / (2.0 * p.hbar)).sqrt() * self.q0.abs()
    }
}

fn classical_value(p: &ModelParams, cl: &ClassicalState, t: f64) -> Complex64 {
    let (f, fdot, _) = f_derivatives(p, t);
    let q = cl.displacement(p, t);
    let mom = cl.momentum(p, t);
    let a = (p.epsilon * p.omega / (2.0 * p.hbar * f)).sqrt();
    let b = (f / (2.0 * p.epsilon * p.omega * p.hbar)).sqrt();
    Complex64::new(1.0, -fdot / (2.0 * p.omega)) * (a * q) + Complex64::new(0.0, b * mom)
}

/// `A(t)` built directly from a classical trajectory.
///
/// The modulus is the invariant `A0`; `theta` is read off at `t0` so the
/// result coincides with [`amplitude`] for the same `A0` and `θ`.
pub fn amplitude_from_classical(
    params: &ModelParams,
    cl: &ClassicalState,
    t: f64,
) -> Result<CoherentAmplitude> {
    params.validate()?;
    if !cl.q0.is_finite() || !cl.theta0.is_finite() || !t.is_finite() {
        return Err(Error::Domain(
            "classical state and time must be finite".into(),
        ));
    }
    let value = classical_value(params, cl, t);
    let at_t0 = classical_value(params, cl, params.t0);
    let theta = if at_t0.norm() > 0.0 {
        -at_t0.arg()
    } else {
        0.0
    };
    Ok(CoherentAmplitude {
        t,
        a0: value.norm(),
        theta,
        value,
    })
}

/// A root of `ḟ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub kind: SampleKind,
}

/// All nodes and bellies in `[t_from, t_to]`, in time order.
///
/// Roots are seeded from `ḟ = ωR sin(2φ̃ + β)` and polished by Newton
/// steps on the analytic `ḟ`, kept inside the sign-change bracket.
pub fn critical_times(params: &ModelParams, t_from: f64, t_to: f64) -> Result<Vec<CriticalPoint>> {
    params.validate()?;
    if !t_from.is_finite() || !t_to.is_finite() {
        return Err(Error::Domain("time window must be finite".into()));
    }
    let r = fdot_amplitude(params);
    if !(t_to > t_from) || r == 0.0 {
        return Ok(Vec::new());
    }
    let beta = (2.0 * params.c3()).atan2(params.c1 - params.c2);
    let x_from = params.phase_arg(t_from);
    let x_to = params.phase_arg(t_to);
    let m_lo = ((2.0 * x_from + beta) / PI).ceil() as i64 - 1;
    let m_hi = ((2.0 * x_to + beta) / PI).floor() as i64 + 1;
    let quarter = PI / (4.0 * params.omega);

    let mut out = Vec::new();
    for m in m_lo..=m_hi {
        let x = (m as f64 * PI - beta) / 2.0;
        let seed = params.t0 + (x - params.phi) / params.omega;
        let t = polish_root(params, seed, seed - quarter, seed + quarter);
        if t < t_from || t > t_to {
            continue;
        }
        let kind = if m.rem_euclid(2) == 0 {
            SampleKind::Node
        } else {
            SampleKind::Belly
        };
        out.push(CriticalPoint { t, kind });
    }
    Ok(out)
}

fn polish_root(p: &ModelParams, seed: f64, mut lo: f64, mut hi: f64) -> f64 {
    let fdot = |t: f64| f_derivatives(p, t).1;
    let mut f_lo = fdot(lo);
    let mut t = seed;
    for _ in 0..50 {
        let (_, d, dd) = f_derivatives(p, t);
        if d == 0.0 {
            return t;
        }
        if (d > 0.0) == (f_lo > 0.0) {
            lo = t;
            f_lo = d;
        } else {
            hi = t;
        }
        let newton = t - d / dd;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 1e-15 * t.abs().max(1.0) {
            return next;
        }
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;

    fn p52() -> ModelParams {
        ModelParams::new(5.0, 2.0).unwrap()
    }

    #[test]
    fn static_limit_is_flat() {
        let p = ModelParams::default();
        for &t in &[0.0, 0.3, 7.1, -2.0] {
            let s = eval_f(&p, t).unwrap();
            assert_eq!(s.f, 1.0);
            assert_eq!(s.fdot, 0.0);
            assert_eq!(s.kind, SampleKind::Generic);
        }
    }

    #[test]
    fn f_at_reference_instants() {
        let p = p52();
        assert!((eval_f(&p, 0.0).unwrap().f - 2.0).abs() < 1e-15);
        // (5 + 2)/2 + 3 sin(π/2)
        assert!((eval_f(&p, PI / 4.0).unwrap().f - 6.5).abs() < 1e-14);
    }

    #[test]
    fn zeta_identity() {
        let p = ModelParams::builder()
            .c1(3.0)
            .c2(4.0)
            .epsilon(2.0)
            .hbar(0.5)
            .omega(1.7)
            .build()
            .unwrap();
        for i in 0..20 {
            let s = eval_f(&p, 0.37 * i as f64).unwrap();
            assert!((s.zeta * s.f * p.hbar - p.epsilon * p.omega).abs() < 1e-12);
        }
    }

    #[test]
    fn measure_reference_values() {
        let d = |c1, c2| nonstaticity_measure(&ModelParams::new(c1, c2).unwrap()).unwrap();
        assert_eq!(d(1.0, 1.0), 0.0);
        assert!((d(5.0, 2.0) - 2.37).abs() < 0.005);
        assert!((d(1.0, 100.0) - 35.70).abs() < 0.005);
    }

    #[test]
    fn phase_integral_domain() {
        let p = p52();
        assert_eq!(phase_integral(&p, 0.0).unwrap(), 0.0);
        assert!(matches!(phase_integral(&p, -0.1), Err(Error::Domain(_))));
        let s = ModelParams::builder().t0(1.5).build().unwrap();
        assert!((phase_integral(&s, 4.0).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn phase_integral_is_continuous_across_poles() {
        // pole of tan at φ̃ = π/2, i.e. t = π/2 for φ = 0
        let p = p52();
        let h = 1e-9;
        let a = phase_integral(&p, FRAC_PI_2 - h).unwrap();
        let b = phase_integral(&p, FRAC_PI_2).unwrap();
        let c = phase_integral(&p, FRAC_PI_2 + h).unwrap();
        assert!(b > a && c > b);
        assert!(c - a < 1e-8);
    }

    #[test]
    fn half_period_advances_by_half_period() {
        for &(c1, c2, sign) in &[
            (5.0, 2.0, Sign::Plus),
            (1.0, 100.0, Sign::Minus),
            (2.0, 3.0, Sign::Plus),
        ] {
            let p = ModelParams::builder()
                .c1(c1)
                .c2(c2)
                .c3_sign(sign)
                .phi(-0.4)
                .t0(0.8)
                .build()
                .unwrap();
            let t = p.t0 + PI / p.omega;
            assert!((phase_integral(&p, t).unwrap() - PI / p.omega).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_basics() {
        let p = p52();
        let a = amplitude(&p, 1.3, 0.4, 0.0).unwrap();
        assert!((a.value - Complex64::from_polar(1.3, -0.4)).norm() < 1e-15);
        assert!(matches!(
            amplitude(&p, -1.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        let s = ModelParams::default();
        let a = amplitude(&s, 2.0, 0.0, 3.0).unwrap();
        assert!((a.value - Complex64::from_polar(2.0, -3.0)).norm() < 1e-14);
    }

    #[test]
    fn classical_amplitude_limits() {
        let s = ModelParams::default();
        let a = amplitude_from_classical(&s, &ClassicalState::new(2f64.sqrt(), 0.0), 0.0).unwrap();
        assert!((a.a0 - 1.0).abs() < 1e-15);
        let z = amplitude_from_classical(&p52(), &ClassicalState::new(0.0, 0.3), 1.0).unwrap();
        assert_eq!(z.a0, 0.0);
    }

    #[test]
    fn critical_times_static_is_empty() {
        let p = ModelParams::default();
        assert!(critical_times(&p, 0.0, 20.0).unwrap().is_empty());
        assert!(critical_times(&p52(), 3.0, 3.0).unwrap().is_empty());
    }

    #[test]
    fn critical_times_alternate_with_quarter_spacing() {
        let p = p52();
        let pts = critical_times(&p, 0.0, 4.0 * PI).unwrap();
        assert_eq!(pts.len(), 8);
        for w in pts.windows(2) {
            assert!((w[1].t - w[0].t - FRAC_PI_2).abs() < 1e-12);
            assert_ne!(w[0].kind, w[1].kind);
        }
        for c in &pts {
            let s = eval_f(&p, c.t).unwrap();
            assert!(s.fdot.abs() < 1e-10);
            assert_eq!(c.kind, s.kind);
        }
    }
}

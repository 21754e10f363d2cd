//! Wigner distribution of the nonstatic coherent state.
//!
//! [`wigner_closed`] evaluates the Gaussian closed form; [`wigner_numeric`]
//! evaluates the defining overlap integral from the q-space wave function
//! and serves as its oracle. [`ellipse_track`] summarises the squeezed
//! contour (centre, orientation, principal widths) over time.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonstatic::{amplitude, f_derivatives, CoherentAmplitude};
use crate::observables::fluctuations;
use crate::params::ModelParams;
use crate::quadrature::{integrate, QuadConfig};
use crate::wavefunction::{CoherentWave, MomentumWave};

/// Required accuracy of each numerically integrated Wigner sample.
pub const NUMERIC_TOLERANCE: f64 = 1e-7;
/// Half-width of the `y` window in units of the position spread.
const Y_WINDOW_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub nq: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
    pub t: f64,
}

impl PhaseSpaceGrid {
    pub fn new(
        (q_min, q_max, nq): (f64, f64, usize),
        (p_min, p_max, np): (f64, f64, usize),
        t: f64,
    ) -> Result<Self> {
        for (lo, hi, n) in [(q_min, q_max, nq), (p_min, p_max, np)] {
            if !lo.is_finite() || !hi.is_finite() || !(hi > lo) || n < 3 {
                return Err(Error::invalid(
                    "grid",
                    format!("need finite max > min and >= 3 points, got [{lo}, {hi}] x {n}"),
                ));
            }
        }
        Ok(PhaseSpaceGrid {
            q_min,
            q_max,
            nq,
            p_min,
            p_max,
            np,
            t,
        })
    }

    /// `n × n` grid spanning the packet's centre ± 6σ on both axes at `amp.t`.
    pub fn auto(params: &ModelParams, amp: &CoherentAmplitude, n: usize) -> Result<Self> {
        let wq = CoherentWave::new(params, amp);
        let wp = MomentumWave::new(params, amp);
        PhaseSpaceGrid::new(
            (
                wq.center() - 6.0 * wq.sigma(),
                wq.center() + 6.0 * wq.sigma(),
                n,
            ),
            (
                wp.center() - 6.0 * wp.sigma(),
                wp.center() + 6.0 * wp.sigma(),
                n,
            ),
            amp.t,
        )
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        if i + 1 == self.nq {
            self.q_max
        } else {
            self.q_min + i as f64 * self.dq()
        }
    }

    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.np {
            self.p_max
        } else {
            self.p_min + j as f64 * self.dp()
        }
    }
}

/// Real Wigner samples, row-major with `q` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
    /// Largest imaginary part discarded when forming `values`.
    pub max_imag_residue: f64,
}

/// Moments of a sampled phase-space distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceMoments {
    pub norm: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub cov_qp: f64,
}

impl PhaseSpaceMoments {
    pub fn determinant(&self) -> f64 {
        self.var_q * self.var_p - self.cov_qp * self.cov_qp
    }
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

impl WignerField {
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.grid.np + ip]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫ W dp` at each `q` sample.
    pub fn marginal_q(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.nq)
            .map(|i| {
                (0..g.np)
                    .map(|j| trapezoid_weight(j, g.np) * self.value(i, j))
                    .sum::<f64>()
                    * g.dp()
            })
            .collect()
    }

    /// `∫ W dq` at each `p` sample.
    pub fn marginal_p(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.np)
            .map(|j| {
                (0..g.nq)
                    .map(|i| trapezoid_weight(i, g.nq) * self.value(i, j))
                    .sum::<f64>()
                    * g.dq()
            })
            .collect()
    }

    /// Two-dimensional trapezoid moments.
    pub fn moments(&self) -> PhaseSpaceMoments {
        let g = &self.grid;
        let area = g.dq() * g.dp();
        let mut s = [0.0f64; 6];
        for i in 0..g.nq {
            let (q, wi) = (g.q(i), trapezoid_weight(i, g.nq));
            for j in 0..g.np {
                let (p, wj) = (g.p(j), trapezoid_weight(j, g.np));
                let w = wi * wj * self.value(i, j) * area;
                s[0] += w;
                s[1] += w * q;
                s[2] += w * p;
                s[3] += w * q * q;
                s[4] += w * p * p;
                s[5] += w * q * p;
            }
        }
        let mean_q = s[1] / s[0];
        let mean_p = s[2] / s[0];
        PhaseSpaceMoments {
            norm: s[0],
            mean_q,
            mean_p,
            var_q: s[3] / s[0] - mean_q * mean_q,
            var_p: s[4] / s[0] - mean_p * mean_p,
            cov_qp: s[5] / s[0] - mean_q * mean_p,
        }
    }
}

/// Coefficients of the closed-form exponent at one instant.
#[derive(Debug, Clone, Copy)]
struct ClosedForm {
    zeta: f64,
    chirp: f64,
    hbar: f64,
    amp: Complex64,
}

impl ClosedForm {
    fn new(params: &ModelParams, amp: &CoherentAmplitude) -> Self {
        let (f, fdot, _) = f_derivatives(params, amp.t);
        ClosedForm {
            zeta: params.epsilon * params.omega / (params.hbar * f),
            chirp: fdot / (2.0 * params.omega),
            hbar: params.hbar,
            amp: amp.value,
        }
    }

    fn exponent(&self, q: f64, p: f64) -> Complex64 {
        let (z, s, h, a) = (self.zeta, self.chirp, self.hbar, self.amp);
        let rz = z.sqrt();
        let i = Complex64::i();
        let mixed = rz * s * q - p / (rz * h);
        let lin_q = ((a + a.conj()) + i * s * (a - a.conj())) * ((2.0 * z).sqrt() * q);
        let lin_p = -i / h * (2.0 / z).sqrt() * (a - a.conj()) * p;
        Complex64::new(-z * q * q - mixed * mixed - 2.0 * a.norm_sqr(), 0.0) + lin_q + lin_p
    }

    /// Covariance matrix read off the quadratic part of the exponent,
    /// `ζ(1 + s²) q² - 2 (s/ħ) q p + p²/(ζħ²)`, which is `½ vᵀ Σ⁻¹ v`.
    fn covariance(&self) -> [[f64; 2]; 2] {
        let (z, s, h) = (self.zeta, self.chirp, self.hbar);
        let inv = [
            [2.0 * z * (1.0 + s * s), -2.0 * s / h],
            [-2.0 * s / h, 2.0 / (z * h * h)],
        ];
        let det = inv[0][0] * inv[1][1] - inv[0][1] * inv[1][0];
        [
            [inv[1][1] / det, -inv[0][1] / det],
            [-inv[1][0] / det, inv[0][0] / det],
        ]
    }
}

/// Closed-form Wigner function on `grid` (at `grid.t`, with `amp` taken at
/// that time).
pub fn wigner_closed(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    grid: &PhaseSpaceGrid,
) -> Result<WignerField> {
    params.validate()?;
    check_time(amp, grid)?;
    let form = ClosedForm::new(params, amp);
    let scale = 1.0 / (PI * params.hbar);
    let rows: Vec<(Vec<f64>, f64)> = (0..grid.nq)
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            let mut residue = 0.0f64;
            let row = (0..grid.np)
                .map(|j| {
                    let w = form.exponent(q, grid.p(j)).exp() * scale;
                    residue = residue.max(w.im.abs());
                    w.re
                })
                .collect();
            (row, residue)
        })
        .collect();
    Ok(assemble(*grid, rows))
}

/// Wigner function from its defining integral
/// `W = (1/πħ) ∫ ψ*(q + y) ψ(q - y) e^{2ipy/ħ} dy`, with `ψ = ⟨q|A⟩`.
///
/// Fails with [`Error::Accuracy`] when the adaptive quadrature cannot bring
/// its error estimate below [`NUMERIC_TOLERANCE`] at some sample.
pub fn wigner_numeric(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    grid: &PhaseSpaceGrid,
) -> Result<WignerField> {
    params.validate()?;
    check_time(amp, grid)?;
    let wave = CoherentWave::new(params, amp);
    let half = Y_WINDOW_SIGMAS * wave.sigma();
    let h = params.hbar;
    let scale = 1.0 / (PI * h);
    let cfg = QuadConfig {
        abs_tol: 1e-11,
        rel_tol: 1e-12,
        max_intervals: 400,
    };
    let rows: Vec<Result<(Vec<f64>, f64)>> = (0..grid.nq)
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            let mut residue = 0.0f64;
            let mut row = Vec::with_capacity(grid.np);
            for j in 0..grid.np {
                let p = grid.p(j);
                let r = integrate(
                    |y: f64| {
                        (wave.ln_at(q + y).conj()
                            + wave.ln_at(q - y)
                            + Complex64::new(0.0, 2.0 * p * y / h))
                        .exp()
                    },
                    -half,
                    half,
                    cfg,
                );
                let err = r.error * scale;
                if err > NUMERIC_TOLERANCE {
                    return Err(Error::Accuracy {
                        estimate: err,
                        tolerance: NUMERIC_TOLERANCE,
                        context: format!("Wigner integral at q = {q}, p = {p}"),
                    });
                }
                residue = residue.max((r.value.im * scale).abs());
                row.push(r.value.re * scale);
            }
            Ok((row, residue))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(assemble(*grid, rows))
}

fn check_time(amp: &CoherentAmplitude, grid: &PhaseSpaceGrid) -> Result<()> {
    if amp.t != grid.t {
        return Err(Error::Domain(format!(
            "amplitude taken at t = {} but grid is at t = {}",
            amp.t, grid.t
        )));
    }
    Ok(())
}

fn assemble(grid: PhaseSpaceGrid, rows: Vec<(Vec<f64>, f64)>) -> WignerField {
    let max_imag_residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    WignerField {
        grid,
        values: rows.into_iter().flat_map(|r| r.0).collect(),
        max_imag_residue,
    }
}

/// Phase-space covariance `[[Var q, Cov], [Cov, Var p]]` of the state at `t`.
///
/// The variances come from the quadrature fluctuations; the symmetric
/// cross term `ħḟ/4ω` is read off the closed form's `q·p` coefficient.
pub fn covariance(params: &ModelParams, t: f64) -> Result<[[f64; 2]; 2]> {
    let fl = fluctuations(params, t)?;
    let form = ClosedForm {
        amp: Complex64::new(0.0, 0.0),
        ..ClosedForm::new(
            params,
            &CoherentAmplitude {
                t,
                a0: 0.0,
                theta: 0.0,
                value: Complex64::new(0.0, 0.0),
            },
        )
    };
    let cov = form.covariance()[0][1];
    Ok([[fl.dq * fl.dq, cov], [cov, fl.dp * fl.dp]])
}

/// Centre, orientation and principal widths of the Wigner contour.
///
/// Angles and widths refer to the scaled coordinates `x = √(εω) q`,
/// `y = p/√(εω)` (q to the right, p up), in which the static vacuum is a
/// circle of radius `√(ħ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSummary {
    pub t: f64,
    pub center_q: f64,
    pub center_p: f64,
    /// Polar angle of the centre; `None` at the origin.
    pub center_angle: Option<f64>,
    /// Major-axis angle in `(-π/2, π/2]`; `None` for a circular contour.
    pub orientation: Option<f64>,
    pub sigma_major: f64,
    pub sigma_minor: f64,
}

/// Summarises the contour at each time for the amplitude `amp.a0`, `amp.theta`.
pub fn ellipse_track(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    times: &[f64],
) -> Result<Vec<EllipseSummary>> {
    params.validate()?;
    if times.len() < 2 {
        return Err(Error::Domain(
            "ellipse tracking needs at least two times".into(),
        ));
    }
    let scale = (params.epsilon * params.omega).sqrt();
    times
        .par_iter()
        .map(|&t| {
            let a = amplitude(params, amp.a0, amp.theta, t)?;
            let center_q = CoherentWave::new(params, &a).center();
            let center_p = MomentumWave::new(params, &a).center();
            let (x, y) = (center_q * scale, center_p / scale);
            let center_angle = (x != 0.0 || y != 0.0).then(|| y.atan2(x));

            let c = covariance(params, t)?;
            let (a11, a22, a12) = (c[0][0] * scale * scale, c[1][1] / (scale * scale), c[0][1]);
            let mean = 0.5 * (a11 + a22);
            let spread = (0.5 * (a11 - a22)).hypot(a12);
            let orientation = (spread > 1e-12 * mean).then(|| {
                let ang = 0.5 * (2.0 * a12).atan2(a11 - a22);
                if ang <= -PI / 2.0 {
                    ang + PI
                } else {
                    ang
                }
            });
            Ok(EllipseSummary {
                t,
                center_q,
                center_p,
                center_angle,
                orientation,
                sigma_major: (mean + spread).sqrt(),
                sigma_minor: (mean - spread).max(0.0).sqrt(),
            })
        })
        .collect()
}

/// Time needed for an angle series to wind through a full turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub period: f64,
    pub clockwise: bool,
}

/// Unwraps `angles` (defined modulo `modulus`) and returns the first time
/// their accumulated change reaches `2π`, linearly interpolated.
pub fn rotation_period(times: &[f64], angles: &[f64], modulus: f64) -> Option<Rotation> {
    if times.len() != angles.len() || times.len() < 2 {
        return None;
    }
    let mut unwrapped = Vec::with_capacity(angles.len());
    unwrapped.push(angles[0]);
    for w in angles.windows(2) {
        let mut d = w[1] - w[0];
        d -= modulus * (d / modulus).round();
        let last = *unwrapped.last().unwrap();
        unwrapped.push(last + d);
    }
    let start = unwrapped[0];
    for k in 1..unwrapped.len() {
        let total = unwrapped[k] - start;
        if total.abs() >= 2.0 * PI {
            let prev = (unwrapped[k - 1] - start).abs();
            let frac = (2.0 * PI - prev) / (total.abs() - prev);
            let t = times[k - 1] + frac * (times[k] - times[k - 1]);
            return Some(Rotation {
                period: t - times[0],
                clockwise: total < 0.0,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_vacuum_peak_and_circle() {
        let p = ModelParams::default();
        let amp = amplitude(&p, 0.0, 0.0, 0.5).unwrap();
        let grid = PhaseSpaceGrid::new((-1.0, 1.0, 3), (-1.0, 1.0, 3), 0.5).unwrap();
        let w = wigner_closed(&p, &amp, &grid).unwrap();
        assert!((w.value(1, 1) - 1.0 / PI).abs() < 1e-15);
        // circular: W(1, 0) = W(0, 1)
        assert!((w.value(2, 1) - w.value(1, 2)).abs() < 1e-16);
        let track = ellipse_track(&p, &amp, &[0.0, 1.0]).unwrap();
        for e in track {
            assert!(e.orientation.is_none() && e.center_angle.is_none());
            assert!((e.sigma_major - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn numeric_matches_known_vacuum() {
        let p = ModelParams::default();
        let amp = amplitude(&p, 0.0, 0.0, 0.0).unwrap();
        let grid = PhaseSpaceGrid::new((-3.0, 3.0, 13), (-3.0, 3.0, 13), 0.0).unwrap();
        let w = wigner_numeric(&p, &amp, &grid).unwrap();
        for i in 0..13 {
            for j in 0..13 {
                let (q, pp) = (grid.q(i), grid.p(j));
                let exact = (-q * q - pp * pp).exp() / PI;
                assert!((w.value(i, j) - exact).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn time_mismatch_is_rejected() {
        let p = ModelParams::default();
        let amp = amplitude(&p, 0.0, 0.0, 0.0).unwrap();
        let grid = PhaseSpaceGrid::new((-1.0, 1.0, 3), (-1.0, 1.0, 3), 1.0).unwrap();
        assert!(wigner_closed(&p, &amp, &grid).is_err());
    }

    #[test]
    fn covariance_is_pure_state() {
        let p = ModelParams::builder()
            .c1(5.0)
            .c2(2.0)
            .epsilon(1.3)
            .hbar(0.7)
            .build()
            .unwrap();
        for i in 0..20 {
            let c = covariance(&p, 0.3 * i as f64).unwrap();
            let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
            assert!((det - 0.25 * 0.49).abs() < 1e-12);
            let s = crate::nonstatic::eval_f(&p, 0.3 * i as f64).unwrap();
            assert!((c[0][1] - 0.7 * s.fdot / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn period_of_uniform_rotation() {
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let angles: Vec<f64> = times
            .iter()
            .map(|t| ((-1.3 * t + PI) % (2.0 * PI)) - PI)
            .collect();
        let r = rotation_period(&times, &angles, 2.0 * PI).unwrap();
        assert!(r.clockwise);
        assert!((r.period - 2.0 * PI / 1.3).abs() < 1e-12);
        assert!(rotation_period(&times[..3], &angles[..3], 2.0 * PI).is_none());
    }
}

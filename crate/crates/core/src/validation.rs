//! Invariant suite run against one parameter set.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nonstatic::{
    amplitude, critical_times, f_derivatives, phase_integral, CoherentAmplitude,
};
use crate::observables::{bogoliubov, fluctuations, ObservableSeries};
use crate::params::ModelParams;
use crate::quadrature::{integrate, QuadConfig};
use crate::wavefunction::{
    coherent_p, coherent_q, Axis, CoherentWave, MomentumWave, QuadratureGrid,
};
use crate::wigner::{wigner_closed, wigner_numeric, PhaseSpaceGrid};

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured deviation (or margin) compared against `tolerance`.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub nonstaticity: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Evenly spread sample times over `periods` oscillation periods, offset so
/// that none coincides with a grid-aligned special point.
fn sample_times(params: &ModelParams, periods: f64, n: usize) -> Vec<f64> {
    let span = periods * params.period();
    (0..n)
        .map(|i| params.t0 + span * ((i as f64 + 0.5 * (5f64.sqrt() - 1.0)) / n as f64))
        .collect()
}

/// Runs every invariant for `params` and the amplitude `(a0, theta)`.
///
/// Each tolerance is multiplied by `tol_scale`.
pub fn validate(
    params: &ModelParams,
    a0: f64,
    theta: f64,
    tol_scale: f64,
) -> Result<ValidationReport> {
    params.validate()?;
    let k = tol_scale;
    let w = params.omega;
    let h = params.hbar;
    let mut checks = Vec::new();

    let times = sample_times(params, 3.0, 10_000);
    let residual = times
        .iter()
        .map(|&t| {
            let (f, d, dd) = f_derivatives(params, t);
            (dd - d * d / (2.0 * f) + 2.0 * w * w * (f - 1.0 / f)).abs() / (w * w)
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "auxiliary equation residual",
        residual,
        1e-8 * k,
    ));

    let half = PI / w;
    let period_dev = times
        .iter()
        .map(|&t| (f_derivatives(params, t + half).0 - f_derivatives(params, t).0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("f period pi/omega", period_dev, 1e-10 * k));

    let f_min_sampled = times
        .iter()
        .map(|&t| f_derivatives(params, t).0)
        .fold(f64::INFINITY, f64::min);
    checks.push(Check {
        name: "f positive and above its minimum".into(),
        value: f_min_sampled,
        tolerance: params.f_min(),
        passed: f_min_sampled > 0.0 && f_min_sampled >= params.f_min() * (1.0 - 1e-12 * k),
    });

    // phase integral against cumulative quadrature of 1/f
    let cfg = QuadConfig::default();
    let t_grid: Vec<f64> = (0..=600)
        .map(|i| params.t0 + 3.0 * params.period() * i as f64 / 600.0)
        .collect();
    let mut acc = 0.0;
    let mut t_dev: f64 = 0.0;
    let mut monotone = true;
    let mut prev_t = 0.0;
    for pair in t_grid.windows(2) {
        acc += integrate(
            |s: f64| 1.0 / f_derivatives(params, s).0,
            pair[0],
            pair[1],
            cfg,
        )
        .value;
        let closed = phase_integral(params, pair[1])?;
        t_dev = t_dev.max((closed - acc).abs());
        monotone &= closed > prev_t;
        prev_t = closed;
    }
    checks.push(Check::at_most(
        "phase integral vs quadrature",
        t_dev,
        1e-8 * k,
    ));
    checks.push(Check {
        name: "phase integral increasing".into(),
        value: if monotone { 0.0 } else { 1.0 },
        tolerance: 0.0,
        passed: monotone,
    });
    let advance = (phase_integral(params, params.t0 + half)? - half).abs();
    checks.push(Check::at_most(
        "phase advance over pi/omega",
        advance,
        1e-10 * k,
    ));

    let amps: Vec<CoherentAmplitude> = t_grid
        .iter()
        .map(|&t| amplitude(params, a0, theta, t))
        .collect::<Result<_>>()?;
    let modulus = amps
        .iter()
        .map(|a| (a.value.norm() - a0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "amplitude modulus constant",
        modulus,
        1e-10 * k,
    ));

    let step = 1e-5 / w;
    let kappa_dev = t_grid[1..t_grid.len() - 1]
        .iter()
        .map(|&t| -> Result<f64> {
            let hi = amplitude(params, a0, theta, t + step)?.kappa(params);
            let lo = amplitude(params, a0, theta, t - step)?.kappa(params);
            let f = f_derivatives(params, t).0;
            Ok(((hi - lo) / (2.0 * step) + w / f).abs() / w)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::at_most("phase rate -omega/f", kappa_dev, 1e-6 * k));

    let series = ObservableSeries::compute(params, a0, theta, &t_grid)?;
    checks.push(Check::at_most(
        "energy conservation",
        series.relative_energy_drift(),
        1e-10 * k,
    ));
    checks.push(Check {
        name: "uncertainty product bound".into(),
        value: series.min_product(),
        tolerance: 0.5 * h,
        passed: series.min_product() >= 0.5 * h - 1e-12 * h * k,
    });
    if let Some(drift) = series.mandel_drift() {
        checks.push(Check::at_most("Mandel Q constant", drift, 1e-8 * k));
    }

    let crit = critical_times(params, params.t0, params.t0 + 3.0 * params.period())?;
    let mut crit_dev: f64 = 0.0;
    let mut alternating = true;
    for (i, c) in crit.iter().enumerate() {
        crit_dev = crit_dev.max((fluctuations(params, c.t)?.product - 0.5 * h).abs() / h);
        if i > 0 {
            alternating &= crit[i - 1].kind != c.kind;
        }
    }
    checks.push(Check::at_most(
        "minimal product at nodes and bellies",
        crit_dev,
        1e-10 * k,
    ));
    checks.push(Check {
        name: "nodes and bellies alternate".into(),
        value: if alternating { 0.0 } else { 1.0 },
        tolerance: 0.0,
        passed: alternating,
    });

    let mut bracket_dev: f64 = 0.0;
    let mut width_dev: f64 = 0.0;
    for &t in times.iter().step_by(50) {
        let pair = bogoliubov(params, t)?;
        let fl = fluctuations(params, t)?;
        bracket_dev = bracket_dev.max((pair.bracket() - 1.0).abs());
        width_dev = width_dev
            .max((pair.dq(params)? - fl.dq).abs() / fl.dq)
            .max((pair.dp(params) - fl.dp).abs() / fl.dp);
    }
    checks.push(Check::at_most("Bogoliubov bracket", bracket_dev, 1e-10 * k));
    checks.push(Check::at_most(
        "Bogoliubov quadrature widths",
        width_dev,
        1e-10 * k,
    ));

    let mut norm_dev: f64 = 0.0;
    let mut wigner_dev: f64 = 0.0;
    for &t in &[params.t0, params.t0 + 0.37 * params.period()] {
        let amp = amplitude(params, a0, theta, t)?;
        let wq = CoherentWave::new(params, &amp);
        let wp = MomentumWave::new(params, &amp);
        let gq = QuadratureGrid::new(
            Axis::Q,
            wq.center() - 10.0 * wq.sigma(),
            wq.center() + 10.0 * wq.sigma(),
            801,
        )?;
        let gp = QuadratureGrid::new(
            Axis::P,
            wp.center() - 10.0 * wp.sigma(),
            wp.center() + 10.0 * wp.sigma(),
            801,
        )?;
        norm_dev = norm_dev
            .max((coherent_q(params, &amp, &gq)?.norm - 1.0).abs())
            .max((coherent_p(params, &amp, &gp)?.norm - 1.0).abs());

        let grid = PhaseSpaceGrid::auto(params, &amp, 21)?;
        let closed = wigner_closed(params, &amp, &grid)?;
        let numeric = wigner_numeric(params, &amp, &grid)?;
        let dev = closed
            .values
            .iter()
            .zip(&numeric.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        wigner_dev = wigner_dev.max(dev * PI * h);
    }
    checks.push(Check::at_most("wave function norm", norm_dev, 1e-8 * k));
    checks.push(Check::at_most(
        "Wigner closed form vs integral",
        wigner_dev,
        1e-6 * k,
    ));

    Ok(ValidationReport {
        nonstaticity: crate::nonstatic::nonstaticity_measure(params)?,
        checks,
    })
}

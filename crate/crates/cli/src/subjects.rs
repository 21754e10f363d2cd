//! One table per subject.

use nonstatic_core::{
    amplitude, amplitude_series, coherent_p, coherent_q, critical_times, ellipse_track, energies,
    eval_f, fluctuations, fock_q, nonstaticity_measure, photon_statistics, rotation_period,
    sample_series, validate, wigner_closed, Axis, CoherentAmplitude, CoherentWave, ComplexField,
    MomentumWave, PhaseSpaceGrid, QuadratureGrid,
};

use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::scenario::{AxisSpec, Scenario, Subject};

pub type Grid = (f64, f64, usize);

pub struct RunOutput {
    pub table: Table,
    pub q_grid: Option<Grid>,
    pub p_grid: Option<Grid>,
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
    /// Set when the validate suite has failing checks.
    pub failed: Option<String>,
}

impl RunOutput {
    fn table(table: Table) -> Self {
        RunOutput {
            table,
            q_grid: None,
            p_grid: None,
            summary: Vec::new(),
            failed: None,
        }
    }
}

/// Smallest default range for 1D densities.
const MIN_HALF_WIDTH: f64 = 12.0;
const MIN_POINTS: usize = 1601;
const MAX_AUTO_POINTS: usize = 8001;

fn lib(e: nonstatic_core::Error) -> CliError {
    CliError::from_library(e)
}

/// Fills unspecified bounds from `(lo, hi)` and the point count from the
/// finest feature size `scale` (four samples per scale, within limits).
fn resolve(spec: AxisSpec, lo: f64, hi: f64, scale: f64) -> Grid {
    let min = spec.min.unwrap_or(lo);
    let max = spec.max.unwrap_or(hi);
    let n = spec.n.unwrap_or_else(|| {
        let want = ((max - min) / (0.25 * scale)).ceil() as usize + 1;
        want.clamp(MIN_POINTS, MAX_AUTO_POINTS)
    });
    (min, max, n)
}

/// Bounds spanning `center ± 6σ` of every frame, widened to at least
/// `±MIN_HALF_WIDTH` when `floor` is set, and the smallest `σ`.
fn envelope(frames: impl Iterator<Item = (f64, f64)>, floor: bool) -> (f64, f64, f64) {
    let start = if floor {
        (-MIN_HALF_WIDTH, MIN_HALF_WIDTH, f64::INFINITY)
    } else {
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY)
    };
    let (lo, hi, s) = frames.fold(start, |(lo, hi, s), (c, sigma)| {
        (
            lo.min(c - 6.0 * sigma),
            hi.max(c + 6.0 * sigma),
            s.min(sigma),
        )
    });
    if floor {
        (lo.floor(), hi.ceil(), s)
    } else {
        (lo, hi, s)
    }
}

fn warn_coverage(field: &ComplexField, summary: &mut Vec<String>) {
    if field.coverage_warning {
        summary.push(format!(
            "warning: packet extends beyond the grid at t = {} (norm {:.6})",
            field.t, field.norm
        ));
    }
}

fn amplitudes(s: &Scenario, times: &[f64]) -> Result<Vec<CoherentAmplitude>, CliError> {
    amplitude_series(&s.params, s.a0, s.theta, times).map_err(lib)
}

pub fn run(s: &Scenario) -> Result<RunOutput, CliError> {
    let times = s.times();
    let p = &s.params;
    match s.subject {
        Subject::DensityQ => {
            let amps = amplitudes(s, &times)?;
            let waves = amps.iter().map(|a| CoherentWave::new(p, a));
            let (lo, hi, sigma) = envelope(waves.map(|w| (w.center(), w.sigma())), true);
            let g = resolve(s.q, lo, hi, sigma);
            let grid = QuadratureGrid::new(Axis::Q, g.0, g.1, g.2).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&["t", "q", "density"]));
            for a in &amps {
                let field = coherent_q(p, a, &grid).map_err(lib)?;
                warn_coverage(&field, &mut out.summary);
                for (i, rho) in field.density().into_iter().enumerate() {
                    out.table
                        .push(vec![a.t.into(), grid.point(i).into(), rho.into()]);
                }
            }
            out.q_grid = Some(g);
            Ok(out)
        }
        Subject::DensityP => {
            let amps = amplitudes(s, &times)?;
            let waves = amps.iter().map(|a| MomentumWave::new(p, a));
            let (lo, hi, sigma) = envelope(waves.map(|w| (w.center(), w.sigma())), true);
            let g = resolve(s.p, lo, hi, sigma);
            let grid = QuadratureGrid::new(Axis::P, g.0, g.1, g.2).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&["t", "p", "density"]));
            for a in &amps {
                let field = coherent_p(p, a, &grid).map_err(lib)?;
                warn_coverage(&field, &mut out.summary);
                for (i, rho) in field.density().into_iter().enumerate() {
                    out.table
                        .push(vec![a.t.into(), grid.point(i).into(), rho.into()]);
                }
            }
            out.p_grid = Some(g);
            Ok(out)
        }
        Subject::FockDensity => {
            let n = s.fock_n as f64;
            let mut half = MIN_HALF_WIDTH;
            let mut scale = f64::INFINITY;
            for &t in &times {
                let width = 1.0 / eval_f(p, t).map_err(lib)?.zeta.sqrt();
                half = half.max(((2.0 * n + 1.0).sqrt() + 6.0) * width);
                scale = scale.min(width / (2.0 * n + 1.0).sqrt());
            }
            let g = resolve(s.q, -half.ceil(), half.ceil(), scale);
            let grid = QuadratureGrid::new(Axis::Q, g.0, g.1, g.2).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&["t", "q", "density"]));
            for &t in &times {
                let field = fock_q(p, s.fock_n, &grid, t).map_err(lib)?;
                warn_coverage(&field, &mut out.summary);
                for (i, rho) in field.density().into_iter().enumerate() {
                    out.table
                        .push(vec![t.into(), grid.point(i).into(), rho.into()]);
                }
            }
            out.q_grid = Some(g);
            Ok(out)
        }
        Subject::Energies => {
            let mut table = Table::new(&["t", "electric", "magnetic", "total"]);
            for a in amplitudes(s, &times)? {
                let e = energies(p, &a).map_err(lib)?;
                table.push(vec![
                    a.t.into(),
                    e.electric.into(),
                    e.magnetic.into(),
                    e.total.into(),
                ]);
            }
            Ok(RunOutput::table(table))
        }
        Subject::Fluctuations => {
            let mut table = Table::new(&["t", "dq", "dp", "product"]);
            for &t in &times {
                let f = fluctuations(p, t).map_err(lib)?;
                table.push(vec![t.into(), f.dq.into(), f.dp.into(), f.product.into()]);
            }
            Ok(RunOutput::table(table))
        }
        Subject::Wigner => {
            let amps = amplitudes(s, &times)?;
            let (qlo, qhi, _) = envelope(
                amps.iter().map(|a| {
                    let w = CoherentWave::new(p, a);
                    (w.center(), w.sigma())
                }),
                false,
            );
            let (plo, phi, _) = envelope(
                amps.iter().map(|a| {
                    let w = MomentumWave::new(p, a);
                    (w.center(), w.sigma())
                }),
                false,
            );
            // point counts always come from the scenario (default 301)
            let gq = resolve(s.q, qlo, qhi, 1.0);
            let gp = resolve(s.p, plo, phi, 1.0);
            let mut out = RunOutput::table(Table::new(&["t", "q", "p", "w"]));
            for a in &amps {
                let grid = PhaseSpaceGrid::new(gq, gp, a.t).map_err(lib)?;
                let w = wigner_closed(p, a, &grid).map_err(lib)?;
                for i in 0..grid.nq {
                    for j in 0..grid.np {
                        out.table.push(vec![
                            a.t.into(),
                            grid.q(i).into(),
                            grid.p(j).into(),
                            w.value(i, j).into(),
                        ]);
                    }
                }
            }
            out.q_grid = Some(gq);
            out.p_grid = Some(gp);
            Ok(out)
        }
        Subject::Ellipse => {
            let start = amplitude(p, s.a0, s.theta, s.t_from).map_err(lib)?;
            let track = ellipse_track(p, &start, &times).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&[
                "t",
                "center_q",
                "center_p",
                "center_angle",
                "orientation",
                "sigma_major",
                "sigma_minor",
            ]));
            for e in &track {
                out.table.push(vec![
                    e.t.into(),
                    e.center_q.into(),
                    e.center_p.into(),
                    e.center_angle.into(),
                    e.orientation.into(),
                    e.sigma_major.into(),
                    e.sigma_minor.into(),
                ]);
            }
            let report = |label: &str, angles: Option<Vec<f64>>, modulus: f64| match angles
                .and_then(|a| rotation_period(&times, &a, modulus))
            {
                Some(r) => format!(
                    "{label} rotation period {:.12} ({})",
                    r.period,
                    if r.clockwise {
                        "clockwise"
                    } else {
                        "counterclockwise"
                    }
                ),
                None => format!("{label} rotation: no full turn in the window"),
            };
            let centre: Option<Vec<f64>> = track.iter().map(|e| e.center_angle).collect();
            let axis: Option<Vec<f64>> = track.iter().map(|e| e.orientation).collect();
            out.summary
                .push(report("centre", centre, 2.0 * std::f64::consts::PI));
            out.summary
                .push(report("orientation", axis, std::f64::consts::PI));
            Ok(out)
        }
        Subject::MandelQ => {
            let mut table = Table::new(&["t", "mean", "variance", "q"]);
            for a in amplitudes(s, &times)? {
                let st = photon_statistics(p, &a).map_err(lib)?;
                table.push(vec![
                    a.t.into(),
                    st.mean.into(),
                    st.variance.into(),
                    st.q.into(),
                ]);
            }
            Ok(RunOutput::table(table))
        }
        Subject::Nonstaticity => {
            let samples = sample_series(p, &times).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&[
                "t",
                "f",
                "fdot",
                "fddot",
                "zeta",
                "phase_integral",
                "kind",
            ]));
            for x in &samples {
                out.table.push(vec![
                    x.t.into(),
                    x.f.into(),
                    x.fdot.into(),
                    x.fddot.into(),
                    x.zeta.into(),
                    x.phase_integral.into(),
                    Cell::Text(x.kind.as_str().to_string()),
                ]);
            }
            let d = nonstaticity_measure(p).map_err(lib)?;
            out.summary.push(format!("D = {d:.2}"));
            for c in critical_times(p, s.t_from, s.t_to).map_err(lib)? {
                out.summary
                    .push(format!("{} at t = {:.12}", c.kind.as_str(), c.t));
            }
            Ok(out)
        }
        Subject::Validate => {
            let report = validate(p, s.a0, s.theta, s.tol_scale).map_err(lib)?;
            let mut out = RunOutput::table(Table::new(&["check", "value", "tolerance", "passed"]));
            for c in &report.checks {
                out.table.push(vec![
                    Cell::Text(c.name.clone()),
                    c.value.into(),
                    c.tolerance.into(),
                    Cell::Bool(c.passed),
                ]);
                out.summary.push(format!(
                    "{} {}: {:.3e} (tolerance {:.3e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tolerance
                ));
            }
            out.summary.push(format!("D = {:.2}", report.nonstaticity));
            let failing = report.checks.iter().filter(|c| !c.passed).count();
            if failing > 0 {
                out.failed = Some(format!(
                    "{failing} of {} invariant checks failed",
                    report.checks.len()
                ));
            }
            Ok(out)
        }
    }
}

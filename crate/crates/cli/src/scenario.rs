//! Command-line and configuration-file parsing into a resolved scenario.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use nonstatic_core::{ModelParams, Sign};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    DensityQ,
    DensityP,
    FockDensity,
    Energies,
    Fluctuations,
    Wigner,
    Ellipse,
    MandelQ,
    Nonstaticity,
    Validate,
}

impl Subject {
    pub fn name(self) -> &'static str {
        match self {
            Subject::DensityQ => "density-q",
            Subject::DensityP => "density-p",
            Subject::FockDensity => "fock-density",
            Subject::Energies => "energies",
            Subject::Fluctuations => "fluctuations",
            Subject::Wigner => "wigner",
            Subject::Ellipse => "ellipse",
            Subject::MandelQ => "mandel-q",
            Subject::Nonstaticity => "nonstaticity",
            Subject::Validate => "validate",
        }
    }

    fn uses_q_grid(self) -> bool {
        matches!(
            self,
            Subject::DensityQ | Subject::FockDensity | Subject::Wigner
        )
    }

    fn uses_p_grid(self) -> bool {
        matches!(self, Subject::DensityP | Subject::Wigner)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Simulate nonstatic coherent light waves and write plot-ready data.
#[derive(Debug, Parser)]
#[command(name = "nonstatic", version, allow_negative_numbers = true)]
pub struct Cli {
    /// Quantity to compute (may come from --config instead).
    #[arg(value_enum)]
    pub subject: Option<Subject>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// Sign of c3 = ±√(c1 c2 - 1).
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub c3_sign: Option<Sign>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Coherent amplitude modulus A0.
    #[arg(long)]
    pub a0: Option<f64>,
    /// Amplitude phase: A(t0) = A0 e^{-iθ}.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t_from: Option<f64>,
    #[arg(long)]
    pub t_to: Option<f64>,
    /// Number of time samples (at least 2).
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub qmin: Option<f64>,
    #[arg(long)]
    pub qmax: Option<f64>,
    #[arg(long)]
    pub nq: Option<usize>,
    #[arg(long)]
    pub pmin: Option<f64>,
    #[arg(long)]
    pub pmax: Option<f64>,
    #[arg(long)]
    pub np: Option<usize>,
    /// Fock level for fock-density.
    #[arg(long)]
    pub fock_n: Option<usize>,
    /// Output data file; the manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Multiplier applied to every tolerance of the validate suite.
    #[arg(long)]
    pub tol_scale: Option<f64>,
    /// JSON file of scenario fields, or a manifest from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse()
}

/// Every scenario field, each optional; the layout of both config files and
/// the `scenario` section of a manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFields {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<Subject>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c3_sign: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_to: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nt: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nq: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub np: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_scale: Option<f64>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        ScenarioFields { $($field: $top.$field.or($base.$field)),* }
    };
}

impl ScenarioFields {
    fn from_cli(cli: &Cli) -> Self {
        ScenarioFields {
            subject: cli.subject,
            c1: cli.c1,
            c2: cli.c2,
            c3_sign: cli.c3_sign,
            omega: cli.omega,
            epsilon: cli.epsilon,
            hbar: cli.hbar,
            a0: cli.a0,
            theta: cli.theta,
            phi: cli.phi,
            t0: cli.t0,
            t_from: cli.t_from,
            t_to: cli.t_to,
            nt: cli.nt,
            qmin: cli.qmin,
            qmax: cli.qmax,
            nq: cli.nq,
            pmin: cli.pmin,
            pmax: cli.pmax,
            np: cli.np,
            fock_n: cli.fock_n,
            format: cli.format,
            tol_scale: cli.tol_scale,
        }
    }

    /// Fields of `top` win over those of `self`.
    fn overlaid(self, top: ScenarioFields) -> Self {
        overlay!(
            self, top, subject, c1, c2, c3_sign, omega, epsilon, hbar, a0, theta, phi, t0, t_from,
            t_to, nt, qmin, qmax, nq, pmin, pmax, np, fock_n, format, tol_scale
        )
    }

    /// Reads a config file: either bare scenario fields or a manifest,
    /// whose `scenario` section is used.
    fn load(path: &PathBuf) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::usage("--config", format!("cannot read {}: {e}", path.display()))
        })?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
            CliError::usage(
                "--config",
                format!("invalid JSON in {}: {e}", path.display()),
            )
        })?;
        let fields = match value.get("scenario") {
            Some(inner) => {
                let version = value.get("schema_version").and_then(|v| v.as_u64());
                if version != Some(crate::output::SCHEMA_VERSION) {
                    return Err(CliError::usage(
                        "--config",
                        format!("unsupported manifest schema_version {version:?}"),
                    ));
                }
                inner.clone()
            }
            None => value,
        };
        serde_json::from_value(fields).map_err(|e| {
            CliError::usage(
                "--config",
                format!("invalid scenario in {}: {e}", path.display()),
            )
        })
    }
}

/// Closed interval sampled at `n` points; `None` bounds are chosen per subject.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub subject: Subject,
    pub params: ModelParams,
    pub a0: f64,
    pub theta: f64,
    pub t_from: f64,
    pub t_to: f64,
    pub nt: usize,
    pub q: AxisSpec,
    pub p: AxisSpec,
    pub fock_n: usize,
    pub format: Format,
    pub tol_scale: f64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_FOCK_N: usize = 5;

impl Scenario {
    /// Merges config-file values under command-line flags and applies the
    /// defaults (natural units, static mode, `A0 = 1`, `θ = φ = t0 = 0`).
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let base = match &cli.config {
            Some(path) => ScenarioFields::load(path)?,
            None => ScenarioFields::default(),
        };
        let f = base.overlaid(ScenarioFields::from_cli(&cli));
        let subject = f.subject.ok_or_else(|| {
            CliError::usage(
                "subject",
                "no subject given on the command line or in --config",
            )
        })?;

        let d = ModelParams::default();
        let params = ModelParams::builder()
            .c1(f.c1.unwrap_or(d.c1))
            .c2(f.c2.unwrap_or(d.c2))
            .c3_sign(f.c3_sign.unwrap_or(d.c3_sign))
            .omega(f.omega.unwrap_or(d.omega))
            .epsilon(f.epsilon.unwrap_or(d.epsilon))
            .hbar(f.hbar.unwrap_or(d.hbar))
            .phi(f.phi.unwrap_or(d.phi))
            .t0(f.t0.unwrap_or(d.t0))
            .build()
            .map_err(CliError::from_library)?;

        let (default_span, default_nt) = match subject {
            // eight frames a quarter of a half-period apart
            Subject::Wigner => (7.0 * PI / 4.0, 8),
            _ => (4.0 * PI, 201),
        };
        let t_from = f.t_from.unwrap_or(params.t0);
        let t_to = f.t_to.unwrap_or(t_from + default_span / params.omega);
        let default_grid = if subject == Subject::Wigner {
            301
        } else {
            1601
        };
        let scenario = Scenario {
            subject,
            params,
            a0: f.a0.unwrap_or(1.0),
            theta: f.theta.unwrap_or(0.0),
            t_from,
            t_to,
            nt: f.nt.unwrap_or(default_nt),
            q: AxisSpec {
                min: f.qmin,
                max: f.qmax,
                n: f.nq
                    .or((subject == Subject::Wigner).then_some(default_grid)),
            },
            p: AxisSpec {
                min: f.pmin,
                max: f.pmax,
                n: f.np
                    .or((subject == Subject::Wigner).then_some(default_grid)),
            },
            fock_n: f.fock_n.unwrap_or(DEFAULT_FOCK_N),
            format: f.format.unwrap_or(Format::Csv),
            tol_scale: f.tol_scale.unwrap_or(1.0),
            out: cli.out,
        };
        scenario.check()?;
        Ok(scenario)
    }

    fn check(&self) -> Result<(), CliError> {
        let finite = |flag: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CliError::usage(flag, format!("must be finite, got {v}")))
            }
        };
        finite("--a0", self.a0)?;
        finite("--theta", self.theta)?;
        finite("--t-from", self.t_from)?;
        finite("--t-to", self.t_to)?;
        if self.a0 < 0.0 {
            return Err(CliError::usage(
                "--a0",
                format!("must be >= 0, got {}", self.a0),
            ));
        }
        if self.t_from < self.params.t0 {
            return Err(CliError::usage(
                "--t-from",
                format!(
                    "must not precede t0 = {}, got {}",
                    self.params.t0, self.t_from
                ),
            ));
        }
        if !(self.t_to > self.t_from) {
            return Err(CliError::usage(
                "--t-to",
                format!("must exceed t-from = {}, got {}", self.t_from, self.t_to),
            ));
        }
        if self.nt < 2 {
            return Err(CliError::usage(
                "--nt",
                format!("must be at least 2, got {}", self.nt),
            ));
        }
        if !(self.tol_scale > 0.0) || !self.tol_scale.is_finite() {
            return Err(CliError::usage(
                "--tol-scale",
                format!("must be positive, got {}", self.tol_scale),
            ));
        }
        for (spec, names) in [
            (self.q, ["--qmin", "--qmax", "--nq"]),
            (self.p, ["--pmin", "--pmax", "--np"]),
        ] {
            if let Some(v) = spec.min {
                finite(names[0], v)?;
            }
            if let Some(v) = spec.max {
                finite(names[1], v)?;
            }
            if let (Some(lo), Some(hi)) = (spec.min, spec.max) {
                if !(hi > lo) {
                    return Err(CliError::usage(
                        names[1],
                        format!("must exceed {} = {lo}, got {hi}", names[0]),
                    ));
                }
            }
            if matches!(spec.n, Some(n) if n < 3) {
                return Err(CliError::usage(names[2], "must be at least 3"));
            }
        }
        if self.subject == Subject::FockDensity
            && self.fock_n > nonstatic_core::wavefunction::DEFAULT_FOCK_N_MAX
        {
            return Err(CliError::usage(
                "--fock-n",
                format!(
                    "level {} exceeds the supported maximum {}",
                    self.fock_n,
                    nonstatic_core::wavefunction::DEFAULT_FOCK_N_MAX
                ),
            ));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let n = self.nt;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.t_to
                } else {
                    self.t_from + (self.t_to - self.t_from) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// The fully resolved scenario as written to a manifest, with the grids
    /// actually used filled in so a rerun reproduces the same samples.
    pub fn resolved_fields(
        &self,
        q: Option<(f64, f64, usize)>,
        p: Option<(f64, f64, usize)>,
    ) -> ScenarioFields {
        let pr = &self.params;
        let q = q.filter(|_| self.subject.uses_q_grid());
        let p = p.filter(|_| self.subject.uses_p_grid());
        ScenarioFields {
            subject: Some(self.subject),
            c1: Some(pr.c1),
            c2: Some(pr.c2),
            c3_sign: Some(pr.c3_sign),
            omega: Some(pr.omega),
            epsilon: Some(pr.epsilon),
            hbar: Some(pr.hbar),
            a0: Some(self.a0),
            theta: Some(self.theta),
            phi: Some(pr.phi),
            t0: Some(pr.t0),
            t_from: Some(self.t_from),
            t_to: Some(self.t_to),
            nt: Some(self.nt),
            qmin: q.map(|g| g.0),
            qmax: q.map(|g| g.1),
            nq: q.map(|g| g.2),
            pmin: p.map(|g| g.0),
            pmax: p.map(|g| g.1),
            np: p.map(|g| g.2),
            fock_n: (self.subject == Subject::FockDensity).then_some(self.fock_n),
            format: Some(self.format),
            tol_scale: Some(self.tol_scale),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Scenario, CliError> {
        let mut full = vec!["nonstatic"];
        full.extend_from_slice(args);
        Scenario::from_cli(Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn defaults_are_static_natural_units() {
        let s = parse(&["energies"]).unwrap();
        assert_eq!(s.params, ModelParams::default());
        assert_eq!((s.a0, s.theta, s.nt), (1.0, 0.0, 201));
        assert_eq!(s.format, Format::Csv);
    }

    #[test]
    fn constraint_violation_names_flag() {
        let err = parse(&["energies", "--c1", "0.5", "--c2", "1"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("c1"));
    }

    #[test]
    fn negative_values_and_minus_sign_parse() {
        let s = parse(&[
            "energies",
            "--c1",
            "5",
            "--c2",
            "2",
            "--c3-sign",
            "-",
            "--theta",
            "-0.5",
        ])
        .unwrap();
        assert_eq!(s.params.c3_sign, Sign::Minus);
        assert_eq!(s.theta, -0.5);
    }

    #[test]
    fn time_window_is_checked() {
        assert!(parse(&["energies", "--t-from", "2", "--t-to", "1"]).is_err());
        assert!(parse(&["energies", "--nt", "1"]).is_err());
        assert!(parse(&["density-q", "--qmin", "3", "--qmax", "-3"]).is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let base = ScenarioFields {
            c1: Some(2.0),
            c2: Some(3.0),
            ..Default::default()
        };
        let top = ScenarioFields {
            c1: Some(5.0),
            ..Default::default()
        };
        let m = base.overlaid(top);
        assert_eq!((m.c1, m.c2), (Some(5.0), Some(3.0)));
    }
}

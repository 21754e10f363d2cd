//! Coherent-state and Fock-state wave functions sampled on quadrature grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonstatic::{f_derivatives, phase_integral, CoherentAmplitude};
use crate::params::ModelParams;
use crate::quadrature::trapezoid;
use crate::special::hermite_function;

/// Default cap on the Fock index.
pub const DEFAULT_FOCK_N_MAX: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Q,
    P,
}

/// Uniform samples of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl QuadratureGrid {
    pub fn new(axis: Axis, min: f64, max: f64, n: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || !(max > min) {
            return Err(Error::invalid(
                "grid",
                format!("need max > min, got [{min}, {max}]"),
            ));
        }
        if n < 3 {
            return Err(Error::invalid(
                "grid",
                format!("need at least 3 points, got {n}"),
            ));
        }
        Ok(QuadratureGrid { axis, min, max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    fn covers(&self, center: f64, sigma: f64) -> bool {
        center - 4.0 * sigma >= self.min && center + 4.0 * sigma <= self.max
    }
}

/// A complex wave function sampled on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: QuadratureGrid,
    pub t: f64,
    pub values: Vec<Complex64>,
    /// Trapezoid integral of `|ψ|²` over the grid.
    pub norm: f64,
    /// Set when the packet's ±4σ band reaches beyond the grid.
    pub coverage_warning: bool,
}

impl ComplexField {
    fn assemble(grid: QuadratureGrid, t: f64, values: Vec<Complex64>, covered: bool) -> Self {
        let density: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        let norm = trapezoid(&density, grid.spacing());
        ComplexField {
            grid,
            t,
            values,
            norm,
            coverage_warning: !covered,
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Mean and variance of the sampled density (trapezoid rule).
    pub fn moments(&self) -> (f64, f64) {
        let xs = self.grid.points();
        let rho = self.density();
        let h = self.grid.spacing();
        let m0 = trapezoid(&rho, h);
        let w1: Vec<f64> = rho.iter().zip(&xs).map(|(r, x)| r * x).collect();
        let mean = trapezoid(&w1, h) / m0;
        let w2: Vec<f64> = rho
            .iter()
            .zip(&xs)
            .map(|(r, x)| r * (x - mean).powi(2))
            .collect();
        (mean, trapezoid(&w2, h) / m0)
    }

    /// Inner product `⟨self|other⟩` by the trapezoid rule on a shared grid.
    pub fn overlap(&self, other: &ComplexField) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::Domain("overlap requires identical grids".into()));
        }
        let prod: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        Ok(trapezoid(&prod, self.grid.spacing()))
    }
}

fn require_axis(grid: &QuadratureGrid, axis: Axis) -> Result<()> {
    if grid.axis != axis {
        return Err(Error::Domain(format!(
            "grid axis {:?} where {:?} is required",
            grid.axis, axis
        )));
    }
    Ok(())
}

/// Closed-form `⟨q|A⟩` at one instant, ready for pointwise evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CoherentWave {
    zeta: f64,
    /// `ḟ / 2ω`.
    chirp: f64,
    amp: Complex64,
    prefactor: f64,
    constant: Complex64,
}

impl CoherentWave {
    pub fn new(params: &ModelParams, amp: &CoherentAmplitude) -> Self {
        let (f, fdot, _) = f_derivatives(params, amp.t);
        let zeta = params.epsilon * params.omega / (params.hbar * f);
        let a = amp.value;
        CoherentWave {
            zeta,
            chirp: fdot / (2.0 * params.omega),
            amp: a,
            prefactor: (zeta / PI).powf(0.25),
            constant: -0.5 * a.norm_sqr() - 0.5 * a * a,
        }
    }

    pub fn at(&self, q: f64) -> Complex64 {
        self.ln_at(q).exp()
    }

    /// A continuous branch of `ln ⟨q|A⟩`, so that products of
    /// samples need a single exponential.
    pub fn ln_at(&self, q: f64) -> Complex64 {
        let quad = Complex64::new(1.0, -self.chirp) * (-0.5 * self.zeta * q * q);
        let lin = self.amp * ((2.0 * self.zeta).sqrt() * q);
        quad + lin + self.constant + self.prefactor.ln()
    }

    /// `⟨q⟩ = √(2/ζ) Re A`.
    pub fn center(&self) -> f64 {
        (2.0 / self.zeta).sqrt() * self.amp.re
    }

    /// Standard deviation of `|⟨q|A⟩|²`.
    pub fn sigma(&self) -> f64 {
        (0.5 / self.zeta).sqrt()
    }
}

/// Closed-form `⟨p|A⟩` at one instant.
#[derive(Debug, Clone, Copy)]
pub struct MomentumWave {
    zeta: f64,
    chirp: f64,
    hbar: f64,
    amp: Complex64,
    prefactor: Complex64,
    constant: Complex64,
}

impl MomentumWave {
    pub fn new(params: &ModelParams, amp: &CoherentAmplitude) -> Self {
        let (f, fdot, _) = f_derivatives(params, amp.t);
        let zeta = params.epsilon * params.omega / (params.hbar * f);
        let chirp = fdot / (2.0 * params.omega);
        let hbar = params.hbar;
        let a = amp.value;
        let minus = Complex64::new(1.0, -chirp);
        let plus = Complex64::new(1.0, chirp);
        // Re(1 - i s) = 1 > 0, so the principal root is continuous in time.
        let prefactor = (PI * zeta).powf(-0.25) / (minus * hbar).sqrt();
        MomentumWave {
            zeta,
            chirp,
            hbar,
            amp: a,
            prefactor,
            constant: plus * a * a / (minus * 2.0) - 0.5 * a.norm_sqr(),
        }
    }

    pub fn at(&self, p: f64) -> Complex64 {
        let minus = Complex64::new(1.0, -self.chirp);
        let num = Complex64::new(p * p, 0.0)
            + Complex64::i() * self.amp * (2.0 * (2.0 * self.zeta).sqrt() * self.hbar * p);
        let expo = -num / (minus * (2.0 * self.zeta * self.hbar * self.hbar)) + self.constant;
        expo.exp() * self.prefactor
    }

    /// `⟨p⟩ = √(2ζ) ħ (Im A + (ḟ/2ω) Re A)`.
    pub fn center(&self) -> f64 {
        (2.0 * self.zeta).sqrt() * self.hbar * (self.amp.im + self.chirp * self.amp.re)
    }

    pub fn sigma(&self) -> f64 {
        self.hbar * (0.5 * self.zeta * (1.0 + self.chirp * self.chirp)).sqrt()
    }
}

/// Samples `⟨q|A⟩` at the amplitude's time `amp.t`.
pub fn coherent_q(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    grid: &QuadratureGrid,
) -> Result<ComplexField> {
    params.validate()?;
    require_axis(grid, Axis::Q)?;
    let wave = CoherentWave::new(params, amp);
    let values = (0..grid.n)
        .into_par_iter()
        .map(|i| wave.at(grid.point(i)))
        .collect();
    Ok(ComplexField::assemble(
        *grid,
        amp.t,
        values,
        grid.covers(wave.center(), wave.sigma()),
    ))
}

/// Samples `⟨p|A⟩` at the amplitude's time `amp.t`.
pub fn coherent_p(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    grid: &QuadratureGrid,
) -> Result<ComplexField> {
    params.validate()?;
    require_axis(grid, Axis::P)?;
    let wave = MomentumWave::new(params, amp);
    let values = (0..grid.n)
        .into_par_iter()
        .map(|i| wave.at(grid.point(i)))
        .collect();
    Ok(ComplexField::assemble(
        *grid,
        amp.t,
        values,
        grid.covers(wave.center(), wave.sigma()),
    ))
}

/// Samples the Fock-state wave function `⟨q|Ψ_n⟩` with `n <= 50`.
pub fn fock_q(
    params: &ModelParams,
    n: usize,
    grid: &QuadratureGrid,
    t: f64,
) -> Result<ComplexField> {
    fock_q_with_limit(params, n, grid, t, DEFAULT_FOCK_N_MAX)
}

/// `⟨q|Ψ_n⟩ = ⟨q|Φ_n⟩ e^{iγ_n}` with `γ_n = -ω(n + 1/2) T(t)` (so `γ_n(t0) = 0`).
pub fn fock_q_with_limit(
    params: &ModelParams,
    n: usize,
    grid: &QuadratureGrid,
    t: f64,
    n_max: usize,
) -> Result<ComplexField> {
    params.validate()?;
    require_axis(grid, Axis::Q)?;
    if n > n_max {
        return Err(Error::Capability(format!(
            "Fock index {n} exceeds the configured maximum {n_max}"
        )));
    }
    let (f, fdot, _) = f_derivatives(params, t);
    let zeta = params.epsilon * params.omega / (params.hbar * f);
    let chirp = fdot / (2.0 * params.omega);
    let gamma = -params.omega * (n as f64 + 0.5) * phase_integral(params, t)?;
    let root = zeta.sqrt();
    let scale = zeta.powf(0.25);
    let values = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let q = grid.point(i);
            let phase = 0.5 * zeta * chirp * q * q + gamma;
            Complex64::from_polar(scale * hermite_function(n, root * q), phase)
        })
        .collect();
    // classical turning point plus four ground-state widths
    let reach = (((2 * n + 1) as f64).sqrt() + 4.0) / root;
    let covered = grid.min <= -reach && grid.max >= reach;
    Ok(ComplexField::assemble(*grid, t, values, covered))
}

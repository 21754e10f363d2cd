//! Truncated number-basis representation of `|A⟩`, used as an independent
//! check of the closed-form photon statistics.
//!
//! The state is built from the Bogoliubov action alone: `(μ â + ν â† - A)|ψ⟩ = 0`
//! gives `μ√(n+1) c_{n+1} = A c_n - ν√n c_{n-1}` for the number-state
//! coefficients. Moments are then taken with an explicit matrix for `â`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nonstatic::CoherentAmplitude;
use crate::observables::{bogoliubov, PhotonStatistics};
use crate::params::ModelParams;

pub const DEFAULT_LEVELS: usize = 200;
pub const TAIL_TOLERANCE: f64 = 1e-10;
const MAX_LEVELS: usize = 1600;
/// Number of top levels whose probability mass counts as the tail.
const TAIL_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct NumberBasisState {
    pub coefficients: Vec<Complex64>,
    /// Probability mass in the top levels of the truncation.
    pub tail_mass: f64,
}

impl NumberBasisState {
    pub fn levels(&self) -> usize {
        self.coefficients.len()
    }

    /// Statistics from `⟨ψ|â†â|ψ⟩ = ‖âψ‖²` and `⟨(â†â)²⟩ = ‖â†âψ‖²`.
    pub fn statistics(&self) -> Result<PhotonStatistics> {
        let a = annihilation_matrix(self.levels());
        let a_psi = mat_vec(&a, &self.coefficients);
        let mean: f64 = a_psi.iter().map(|c| c.norm_sqr()).sum();
        let n_psi = mat_vec_adjoint(&a, &a_psi);
        let second: f64 = n_psi.iter().map(|c| c.norm_sqr()).sum();
        if !(mean > 0.0) {
            return Err(Error::UndefinedStatistics("zero mean photon number".into()));
        }
        let variance = second - mean * mean;
        Ok(PhotonStatistics {
            mean,
            variance,
            q: (variance - mean) / mean,
        })
    }
}

/// Dense `â` with `⟨n|â|n+1⟩ = √(n+1)`, row-major.
fn annihilation_matrix(levels: usize) -> Vec<f64> {
    let mut m = vec![0.0; levels * levels];
    for n in 0..levels - 1 {
        m[n * levels + n + 1] = ((n + 1) as f64).sqrt();
    }
    m
}

fn mat_vec(m: &[f64], v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            m[i * n..(i + 1) * n]
                .iter()
                .zip(v)
                .fold(Complex64::new(0.0, 0.0), |acc, (a, x)| acc + x * *a)
        })
        .collect()
}

fn mat_vec_adjoint(m: &[f64], v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n)
        .map(|j| (0..n).fold(Complex64::new(0.0, 0.0), |acc, i| acc + v[i] * m[i * n + j]))
        .collect()
}

fn build(mu: Complex64, nu: Complex64, a: Complex64, levels: usize) -> NumberBasisState {
    let mut c = vec![Complex64::new(0.0, 0.0); levels];
    c[0] = Complex64::new(1.0, 0.0);
    if levels > 1 {
        c[1] = a * c[0] / mu;
    }
    for n in 1..levels - 1 {
        let nf = n as f64;
        c[n + 1] = (a * c[n] - nu * nf.sqrt() * c[n - 1]) / (mu * (nf + 1.0).sqrt());
        if c[n + 1].norm() > 1e100 {
            let s = 1.0 / c[n + 1].norm();
            c[..=n + 1].iter_mut().for_each(|x| *x *= s);
        }
    }
    let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    c.iter_mut().for_each(|x| *x /= norm);
    let tail_mass = c[levels.saturating_sub(TAIL_WINDOW)..]
        .iter()
        .map(|x| x.norm_sqr())
        .sum();
    NumberBasisState {
        coefficients: c,
        tail_mass,
    }
}

/// Builds `|A⟩` on at least `levels` number states, doubling the dimension
/// until the tail mass drops below [`TAIL_TOLERANCE`].
pub fn coherent_state_in_number_basis(
    params: &ModelParams,
    amp: &CoherentAmplitude,
    levels: usize,
) -> Result<NumberBasisState> {
    let pair = bogoliubov(params, amp.t)?;
    let mut levels = levels.max(TAIL_WINDOW + 2);
    loop {
        let state = build(pair.mu, pair.nu, amp.value, levels);
        if state.tail_mass <= TAIL_TOLERANCE {
            return Ok(state);
        }
        if levels >= MAX_LEVELS {
            return Err(Error::Capability(format!(
                "number basis tail mass {:e} above {TAIL_TOLERANCE:e} at {levels} levels",
                state.tail_mass
            )));
        }
        levels = (2 * levels).min(MAX_LEVELS);
    }
}

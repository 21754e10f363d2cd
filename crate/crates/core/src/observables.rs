//! Energies, quadrature fluctuations, Bogoliubov coefficients and Mandel's
//! Q parameter in the nonstatic coherent state, all in closed form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonstatic::{amplitude, f_derivatives, CoherentAmplitude};
use crate::params::ModelParams;

/// Expectation values of the electric (`p²/2ε`) and magnetic (`εω²q²/2`)
/// parts of the Hamiltonian, in the energy units implied by `ħ` and `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energies {
    pub electric: f64,
    pub magnetic: f64,
    pub total: f64,
}

pub fn energies(params: &ModelParams, amp: &CoherentAmplitude) -> Result<Energies> {
    params.validate()?;
    let (f, fdot, _) = f_derivatives(params, amp.t);
    let s = fdot / (2.0 * params.omega);
    let a = amp.value;
    let a2 = a * a;
    let n = a.norm_sqr();
    let hw = params.hbar * params.omega;
    let plus = Complex64::new(1.0, s);
    let minus = Complex64::new(1.0, -s);
    let bracket = plus * plus * a2 + minus * minus * a2.conj() - (1.0 + s * s) * (2.0 * n + 1.0);
    let electric = -hw / (4.0 * f) * bracket.re;
    let magnetic = 0.25 * hw * f * (2.0 * a2.re + 2.0 * n + 1.0);
    Ok(Energies {
        electric,
        magnetic,
        total: electric + magnetic,
    })
}

/// Standard deviations of `q` and `p` and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fluctuations {
    pub dq: f64,
    pub dp: f64,
    pub product: f64,
}

pub fn fluctuations(params: &ModelParams, t: f64) -> Result<Fluctuations> {
    params.validate()?;
    let (f, fdot, _) = f_derivatives(params, t);
    let s2 = (fdot / (2.0 * params.omega)).powi(2);
    let (h, e, w) = (params.hbar, params.epsilon, params.omega);
    Ok(Fluctuations {
        dq: (h * f / (2.0 * e * w)).sqrt(),
        dp: (h * e * w / (2.0 * f) * (1.0 + s2)).sqrt(),
        product: 0.5 * h * (1.0 + s2).sqrt(),
    })
}

/// Coefficients of `Â = μ â + ν â†` in terms of the standard ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovPair {
    pub mu: Complex64,
    pub nu: Complex64,
}

impl BogoliubovPair {
    /// `|μ|² - |ν|²`, which is 1 for a canonical transformation.
    pub fn bracket(&self) -> f64 {
        self.mu.norm_sqr() - self.nu.norm_sqr()
    }

    /// `Δq = √(ħ/2εω) (μ - ν)`.
    ///
    /// `μ - ν = √f` is real here; a non-negligible imaginary part means the
    /// pair is inconsistent and is reported as an accuracy failure.
    pub fn dq(&self, params: &ModelParams) -> Result<f64> {
        let diff = self.mu - self.nu;
        if diff.im.abs() > 1e-12 {
            return Err(Error::Accuracy {
                estimate: diff.im.abs(),
                tolerance: 1e-12,
                context: "imaginary part of μ - ν".into(),
            });
        }
        Ok((params.hbar / (2.0 * params.epsilon * params.omega)).sqrt() * diff.re)
    }

    /// `Δp = √(ħεω/2) |μ + ν|`.
    pub fn dp(&self, params: &ModelParams) -> f64 {
        (0.5 * params.hbar * params.epsilon * params.omega).sqrt() * (self.mu + self.nu).norm()
    }
}

pub fn bogoliubov(params: &ModelParams, t: f64) -> Result<BogoliubovPair> {
    params.validate()?;
    let (f, fdot, _) = f_derivatives(params, t);
    let root = f.sqrt();
    let common = Complex64::new(1.0, -fdot / (2.0 * params.omega)) / (2.0 * root);
    Ok(BogoliubovPair {
        mu: common + 0.5 * root,
        nu: common - 0.5 * root,
    })
}

/// Photon-number statistics of the standard mode `â` in the state `|A⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub variance: f64,
    /// Mandel's `Q = (variance - mean) / mean`.
    pub q: f64,
}

pub fn photon_statistics(
    params: &ModelParams,
    amp: &CoherentAmplitude,
) -> Result<PhotonStatistics> {
    let BogoliubovPair { mu, nu } = bogoliubov(params, amp.t)?;
    let a = amp.value;
    let (m2, n2) = (mu.norm_sqr(), nu.norm_sqr());
    let n = a.norm_sqr();
    // μν A*² + μ*ν* A² = 2 Re(μν A*²)
    let cross = 2.0 * (mu * nu * a.conj() * a.conj()).re;
    let mean = (m2 + n2) * n - cross + n2;
    let variance =
        (m2 * m2 + 6.0 * m2 * n2 + n2 * n2) * n - 2.0 * (m2 + n2) * cross + 2.0 * m2 * n2;
    if !(mean > 0.0) {
        return Err(Error::UndefinedStatistics(
            "mean photon number is zero (A0 = 0 in the static limit); Q is 0/0".into(),
        ));
    }
    Ok(PhotonStatistics {
        mean,
        variance,
        q: (variance - mean) / mean,
    })
}

pub fn mandel_q(params: &ModelParams, amp: &CoherentAmplitude) -> Result<f64> {
    photon_statistics(params, amp).map(|s| s.q)
}

/// Closed-form observables sampled over a set of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub electric: Vec<f64>,
    pub magnetic: Vec<f64>,
    pub total: Vec<f64>,
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub product: Vec<f64>,
    /// `None` when Q is undefined (zero mean photon number).
    pub mandel_q: Option<Vec<f64>>,
}

impl ObservableSeries {
    pub fn compute(params: &ModelParams, a0: f64, theta: f64, times: &[f64]) -> Result<Self> {
        type Row = (Energies, Fluctuations, Option<f64>);
        let rows: Vec<Row> = times
            .par_iter()
            .map(|&t| {
                let amp = amplitude(params, a0, theta, t)?;
                let q = match mandel_q(params, &amp) {
                    Ok(q) => Some(q),
                    Err(Error::UndefinedStatistics(_)) => None,
                    Err(e) => return Err(e),
                };
                Ok((energies(params, &amp)?, fluctuations(params, t)?, q))
            })
            .collect::<Result<_>>()?;
        let mandel_q = rows.iter().map(|r| r.2).collect::<Option<Vec<f64>>>();
        Ok(ObservableSeries {
            times: times.to_vec(),
            electric: rows.iter().map(|r| r.0.electric).collect(),
            magnetic: rows.iter().map(|r| r.0.magnetic).collect(),
            total: rows.iter().map(|r| r.0.total).collect(),
            dq: rows.iter().map(|r| r.1.dq).collect(),
            dp: rows.iter().map(|r| r.1.dp).collect(),
            product: rows.iter().map(|r| r.1.product).collect(),
            mandel_q,
        })
    }

    /// `max |E(t) - E(t_first)| / |E(t_first)|`.
    pub fn relative_energy_drift(&self) -> f64 {
        let Some(&e0) = self.total.first() else {
            return 0.0;
        };
        self.total
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs()
    }

    pub fn min_product(&self) -> f64 {
        self.product.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max |Q(t) - Q(t_first)|`, or `None` when Q is undefined.
    pub fn mandel_drift(&self) -> Option<f64> {
        let q = self.mandel_q.as_ref()?;
        let q0 = *q.first()?;
        Some(q.iter().map(|v| (v - q0).abs()).fold(0.0, f64::max))
    }
}

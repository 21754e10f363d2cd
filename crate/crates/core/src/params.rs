//! Model parameters of a single nonstatic scenario.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `c1·c2 - c3² = 1` for the derived `c3`.
const CONSTRAINT_TOL: f64 = 1e-12;

/// Which root of `c3² = c1·c2 - 1` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+" | "plus" | "positive" => Ok(Sign::Plus),
            "-" | "minus" | "negative" => Ok(Sign::Minus),
            other => Err(format!("expected `+` or `-`, got `{other}`")),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Physical constants and nonstaticity constants of one scenario.
///
/// The auxiliary function is
/// `f(t) = c1 sin²φ̃ + c2 cos²φ̃ + c3 sin 2φ̃` with `φ̃ = ω(t - t0) + φ`,
/// where `c3 = ±√(c1 c2 - 1)`. Construct through [`ModelParams::new`] or
/// [`ModelParams::builder`] so that the constraints are checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub epsilon: f64,
    pub omega: f64,
    pub hbar: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3_sign: Sign,
    pub phi: f64,
    pub t0: f64,
}

impl Default for ModelParams {
    /// Static scenario in natural units.
    fn default() -> Self {
        ModelParams {
            epsilon: 1.0,
            omega: 1.0,
            hbar: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3_sign: Sign::Plus,
            phi: 0.0,
            t0: 0.0,
        }
    }
}

impl ModelParams {
    /// Natural-unit scenario (`ε = ω = ħ = 1`, `t0 = φ = 0`, `c3 > 0`).
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        Self::builder().c1(c1).c2(c2).build()
    }

    pub fn builder() -> ModelParamsBuilder {
        ModelParamsBuilder {
            params: ModelParams::default(),
        }
    }

    /// Checks every domain constraint and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        positive("epsilon", self.epsilon)?;
        positive("omega", self.omega)?;
        positive("hbar", self.hbar)?;
        positive("c1", self.c1)?;
        positive("c2", self.c2)?;
        if self.c1 * self.c2 < 1.0 {
            return Err(Error::invalid(
                "c1",
                format!("c1·c2 >= 1 is required, got c1·c2 = {}", self.c1 * self.c2),
            ));
        }
        if !self.phi.is_finite() || !(-FRAC_PI_2..FRAC_PI_2).contains(&self.phi) {
            return Err(Error::invalid(
                "phi",
                format!("must lie in [-π/2, π/2), got {}", self.phi),
            ));
        }
        if !self.t0.is_finite() {
            return Err(Error::invalid("t0", "must be finite"));
        }
        let residual = (self.c1 * self.c2 - self.c3().powi(2) - 1.0).abs();
        if residual > CONSTRAINT_TOL * self.c1 * self.c2 {
            return Err(Error::invalid(
                "c3",
                format!("c1·c2 - c3² = 1 violated by {residual:e}"),
            ));
        }
        Ok(())
    }

    /// The derived constant `c3 = ±√(c1 c2 - 1)`.
    pub fn c3(&self) -> f64 {
        self.c3_sign.factor() * (self.c1 * self.c2 - 1.0).max(0.0).sqrt()
    }

    /// `true` for the standard (static) coherent state `c1 = c2 = 1`.
    pub fn is_static(&self) -> bool {
        self.c1 == 1.0 && self.c2 == 1.0
    }

    /// Phase argument `φ̃(t) = ω(t - t0) + φ`.
    pub fn phase_arg(&self, t: f64) -> f64 {
        self.omega * (t - self.t0) + self.phi
    }

    /// Full period `2π/ω` of the classical motion.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Smallest value taken by `f` over time.
    pub fn f_min(&self) -> f64 {
        let s = 0.5 * (self.c1 + self.c2);
        // s - √(s² - 1) written to avoid cancellation for large s
        1.0 / (s + (s * s - 1.0).max(0.0).sqrt())
    }

    /// Largest value taken by `f` over time.
    pub fn f_max(&self) -> f64 {
        let s = 0.5 * (self.c1 + self.c2);
        s + (s * s - 1.0).max(0.0).sqrt()
    }
}

/// Reduces an arbitrary phase into `[-π/2, π/2)`. `f` has period `π` in
/// its phase, so this never changes the scenario.
pub fn reduce_phase(phi: f64) -> f64 {
    (phi + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2
}

#[derive(Debug, Clone)]
pub struct ModelParamsBuilder {
    params: ModelParams,
}

impl ModelParamsBuilder {
    pub fn epsilon(mut self, v: f64) -> Self {
        self.params.epsilon = v;
        self
    }
    pub fn omega(mut self, v: f64) -> Self {
        self.params.omega = v;
        self
    }
    pub fn hbar(mut self, v: f64) -> Self {
        self.params.hbar = v;
        self
    }
    pub fn c1(mut self, v: f64) -> Self {
        self.params.c1 = v;
        self
    }
    pub fn c2(mut self, v: f64) -> Self {
        self.params.c2 = v;
        self
    }
    pub fn c3_sign(mut self, v: Sign) -> Self {
        self.params.c3_sign = v;
        self
    }
    pub fn phi(mut self, v: f64) -> Self {
        self.params.phi = v;
        self
    }
    pub fn t0(mut self, v: f64) -> Self {
        self.params.t0 = v;
        self
    }

    pub fn build(self) -> Result<ModelParams> {
        self.params.validate()?;
        Ok(self.params)
    }
}

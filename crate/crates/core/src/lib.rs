//! Exact nonstatic coherent states of a light mode in a static medium.
//!
//! The state is parameterised by a positive periodic auxiliary function
//! `f(t) = c1 sin²φ̃ + c2 cos²φ̃ + c3 sin 2φ̃` (with `φ̃ = ω(t - t0) + φ` and
//! `c3 = ±√(c1 c2 - 1)`), from which every width, phase and observable
//! follows in closed form. The static coherent state is `c1 = c2 = 1`.
//!
//! ```
//! use nonstatic_core::{amplitude, energies, ModelParams};
//!
//! let params = ModelParams::new(5.0, 2.0).unwrap();
//! let amp = amplitude(&params, 1.0, 0.0, 0.8).unwrap();
//! let e = energies(&params, &amp).unwrap();
//! assert!(e.total > 0.0);
//! ```

pub mod error;
pub mod nonstatic;
pub mod number_basis;
pub mod observables;
pub mod params;
pub mod quadrature;
pub mod special;
pub mod validation;
pub mod wavefunction;
pub mod wigner;

pub use error::{Error, Result};
pub use nonstatic::{
    amplitude, amplitude_from_classical, amplitude_series, critical_times, eval_f,
    nonstaticity_measure, phase_integral, sample_series, ClassicalState, CoherentAmplitude,
    CriticalPoint, NonstaticSample, SampleKind,
};
pub use number_basis::{coherent_state_in_number_basis, NumberBasisState};
pub use observables::{
    bogoliubov, energies, fluctuations, mandel_q, photon_statistics, BogoliubovPair, Energies,
    Fluctuations, ObservableSeries, PhotonStatistics,
};
pub use params::{reduce_phase, ModelParams, ModelParamsBuilder, Sign};
pub use validation::{validate, Check, ValidationReport};
pub use wavefunction::{
    coherent_p, coherent_q, fock_q, fock_q_with_limit, Axis, CoherentWave, ComplexField,
    MomentumWave, QuadratureGrid,
};
pub use wigner::{
    covariance, ellipse_track, rotation_period, wigner_closed, wigner_numeric, EllipseSummary,
    PhaseSpaceGrid, PhaseSpaceMoments, Rotation, WignerField,
};

/// Library version, recorded in output manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Dipole emission in random dielectric media.
//!
//! A point emitter inside a disordered collection of polarizable scatterers
//! decays at a rate set by the self-polarization field returned by the
//! medium. This crate computes that rate and its decomposition for
//! Maxwell-Garnett media — multiple-scattering γ-factor series, local-field
//! factors, virtual- and real-cavity scenarios, a self-consistent effective
//! dielectric constant — together with a brute-force coupled-dipole
//! simulator for validation and the zero-temperature van-der-Waals and
//! radiative pressures of the polarized vacuum.
//!
//! Units: lengths nm, wave numbers nm⁻¹, polarizabilities nm³, energies eV,
//! rates s⁻¹; decay rates are reported normalized to the free-space rate.
//!
//! With the default `parallel` feature, Monte-Carlo samples and k-grid
//! solves fan out through rayon; results are reduced in deterministic
//! order, so parallel and serial builds produce identical output.

pub mod constants;
pub mod emission;
pub mod error;
pub mod gamma;
pub mod polarizability;
pub mod pressure;
pub mod quad;
pub mod real_cavity;
pub mod self_consistent;
pub mod sim;
pub mod special;

pub use emission::{DecayBreakdown, PowerBreakdown, TransportParams};
pub use error::{Error, Result};
pub use gamma::{GammaFactors, SusceptibilityMG};
pub use polarizability::{EmitterSpec, LorentzOscillator};
pub use pressure::PressureReport;
pub use quad::QuadratureSpec;
pub use real_cavity::CavityScenario;
pub use self_consistent::{MediumSpec, SelfConsistentResult};
pub use sim::{DipoleConfig, EnsembleStats};
pub use special::PropagatorPair;

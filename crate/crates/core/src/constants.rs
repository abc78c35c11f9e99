//! Physical constants, CODATA 2018 values.
//!
//! Unit conventions used throughout the crate: lengths in nm, wave numbers
//! in nm⁻¹, polarizabilities in nm³, energies in eV, rates in s⁻¹.
//! Transition dipole amplitudes enter only through |μ|²/ε₀, in eV·nm³.

/// Speed of light in vacuum, nm/s.
pub const C_NM_PER_S: f64 = 2.997_924_58e17;

/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// ħc, eV·nm (product of the two above, kept exactly consistent).
pub const HBARC_EV_NM: f64 = HBAR_EV_S * C_NM_PER_S;

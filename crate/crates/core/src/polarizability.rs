//! Single-particle polarizability models.
//!
//! Covers the electrostatic sphere, the radiatively corrected free-space
//! polarizability, the Lorentzian two-level model, and the in-medium
//! renormalized polarizability with collisional shift and broadening.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C_NM_PER_S, HBARC_EV_NM};
use crate::error::{Error, Result};
use crate::gamma::GammaFactors;

/// Lorentzian two-level oscillator.
///
/// `k0` is the free-space resonance wave number (nm⁻¹), `alpha0` the static
/// electrostatic polarizability (nm³), `gamma0` the free-space radiative
/// width (s⁻¹). Collisional effects enter through a shift of the squared
/// resonance wave number and an extra damping rate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LorentzOscillator {
    pub alpha0: f64,
    pub k0: f64,
    pub gamma0: f64,
    /// Collisional shift of k², nm⁻².
    pub dk2_coll: f64,
    /// Collisional broadening rate, s⁻¹.
    pub gamma_coll: f64,
}

impl LorentzOscillator {
    /// Oscillator with the radiative width fixed by its own polarizability,
    /// Γ₀ = c α₀ k₀⁴ / 6π, and no collisional terms.
    pub fn from_alpha0(alpha0: f64, k0: f64) -> Self {
        assert!(alpha0 > 0.0 && k0 > 0.0);
        Self {
            alpha0,
            k0,
            gamma0: C_NM_PER_S * alpha0 * k0.powi(4) / (6.0 * std::f64::consts::PI),
            dk2_coll: 0.0,
            gamma_coll: 0.0,
        }
    }
}

/// How the emitter couples to the field.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum DipoleModel {
    /// Fixed transition dipole; the moment does not respond to the field.
    Fixed,
    /// Induced Lorentzian dipole.
    Lorentz(LorentzOscillator),
}

/// Emitter description for decay-rate assemblies.
///
/// `mu2` is |μ|²/ε₀ in eV·nm³; `host_alpha0` the bare polarizability of the
/// particle hosting the emitter (zero for a bare atom).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EmitterSpec {
    pub mu2: f64,
    pub model: DipoleModel,
    pub host_alpha0: f64,
}

/// Electrostatic polarizability of a small sphere,
/// α₀ = 4πa³ (ε_e − 1)/(ε_e + 2).
pub fn alpha0_sphere(a: f64, eps_e: Complex64) -> Result<Complex64> {
    assert!(a > 0.0);
    let den = eps_e + 2.0;
    if den.norm() < 1e-12 {
        return Err(Error::PlasmonPole);
    }
    Ok(4.0 * std::f64::consts::PI * a.powi(3) * (eps_e - 1.0) / den)
}

/// Radiatively corrected off-resonance polarizability in free space,
/// α = α₀ [1 − (i/6π) k³ α₀]⁻¹.
pub fn alpha_free_space(alpha0: f64, k: f64) -> Complex64 {
    assert!(alpha0 >= 0.0 && k > 0.0);
    let a0 = Complex64::new(alpha0, 0.0);
    a0 / (1.0 - Complex64::I / (6.0 * std::f64::consts::PI) * k.powi(3) * alpha0)
}

/// Lorentzian polarizability
/// α(k̃) = α₀ k_res² [k_res² − k̃² − iΓ k̃³/(c k_res²)]⁻¹
/// with frequency-dependent radiative damping.
pub fn alpha_lorentz(osc: &LorentzOscillator, ktilde: f64) -> Complex64 {
    assert!(ktilde >= 0.0);
    let kr2 = osc.k0 * osc.k0;
    let den = Complex64::new(kr2 - ktilde * ktilde, -osc.gamma0 * ktilde.powi(3) / (C_NM_PER_S * kr2));
    osc.alpha0 * kr2 / den
}

/// In-medium renormalized polarizability.
///
/// Relative to the free Lorentzian, the denominator picks up the collisional
/// shift and broadening and the medium part of the dipole self-energy:
///
/// α̃(k̃) = α₀k₀² [k₀² + Δk²_coll − iΓ_coll k̃/c − k̃²
///                + (1/3)α₀k₀²k̃²·(k̃/2π)(−i + ĝ)]⁻¹,
///
/// where ĝ is the divergence-free part of 2γ⊥ + γ∥ in units of k̃/2π and
/// the −i carries the free-space radiative damping. Reduces to
/// [`alpha_lorentz`] when ĝ and the collisional terms vanish.
pub fn alpha_in_medium(osc: &LorentzOscillator, ktilde: f64, gamma: &GammaFactors) -> Complex64 {
    let k02 = osc.k0 * osc.k0;
    let kt2 = ktilde * ktilde;
    let g_hat = gamma.total() - Complex64::I;
    let self_energy = osc.alpha0 * k02 * kt2 / 3.0 * ktilde / (2.0 * std::f64::consts::PI) * g_hat;
    let den = Complex64::new(
        k02 + osc.dk2_coll - kt2,
        -osc.gamma_coll * ktilde / C_NM_PER_S,
    ) + self_energy;
    osc.alpha0 * k02 / den
}

/// Bridge between the static polarizability and the transition dipole:
/// Γ₀ = c α₀ k₀⁴ / 6π and |μ₀|²/ε₀ = α₀ ħc k₀ / 2.
///
/// Returns `(gamma0 [s⁻¹], mu2 [eV·nm³])`; the inverse map
/// α₀ = 2 mu2/(ħc k₀) round-trips exactly.
pub fn gamma0_mu_bridge(alpha0: f64, k0: f64) -> (f64, f64) {
    assert!(alpha0 > 0.0 && k0 > 0.0);
    let gamma0 = C_NM_PER_S * alpha0 * k0.powi(4) / (6.0 * std::f64::consts::PI);
    let mu2 = alpha0 * HBARC_EV_NM * k0 / 2.0;
    (gamma0, mu2)
}

//! Zero-temperature electromagnetic energies and pressures of a dilute
//! dipole gas.
//!
//! The material self-energy at leading order is the van-der-Waals energy of
//! pairs of fluctuating dipoles inside the exclusion shell; the sourceless
//! radiative modes carry an energy density linear in ρ with an O(ρ²)
//! correction. Pressures follow from p = ρ ∂f/∂ρ − f. Energies are in
//! eV/nm³ and pressures in eV/nm³ (1 eV/nm³ = 1.602e8 Pa).

use serde::{Deserialize, Serialize};

use crate::constants::{C_NM_PER_S, HBAR_EV_S, HBARC_EV_NM};

/// Energy densities, pressures and their ratio for one scenario.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PressureReport {
    pub f_vdw: f64,
    pub p_vdw: f64,
    /// van-der-Waals coefficient a′ in p = −a′ρ², eV·nm³.
    pub a_prime: f64,
    pub f_rad_diel: f64,
    pub p_rad: f64,
    /// p_rad / p_vdw.
    pub ratio: f64,
}

/// Van-der-Waals energy density, pressure, and coefficient a′:
/// f = −ρ²ħω₀α₀²/(6πξ³), p = ρ∂f/∂ρ − f = f (quadratic in ρ),
/// a′ = ħω₀α₀²/(6πξ³).
pub fn vdw_energy_pressure(rho: f64, xi: f64, alpha0: f64, k0: f64) -> (f64, f64, f64) {
    assert!(rho > 0.0 && xi > 0.0 && alpha0 > 0.0 && k0 > 0.0);
    let hbar_omega0 = HBARC_EV_NM * k0;
    let a_prime = hbar_omega0 * alpha0 * alpha0 / (6.0 * std::f64::consts::PI * xi.powi(3));
    let f = -a_prime * rho * rho;
    (f, f, a_prime)
}

/// Radiative (sourceless-mode) energy density of the dielectric,
/// f = (cħ/128π³) k₀⁷ α₀² ρ [1 + ρα₀(5/6 − α₀/(6πξ³))].
pub fn radiative_energy(rho: f64, alpha0: f64, k0: f64, xi: f64) -> f64 {
    let lead = C_NM_PER_S * HBAR_EV_S / (128.0 * std::f64::consts::PI.powi(3))
        * k0.powi(7)
        * alpha0
        * alpha0
        * rho;
    lead * (1.0 + rho * alpha0 * (5.0 / 6.0 - alpha0 / (6.0 * std::f64::consts::PI * xi.powi(3))))
}

/// First-order medium inputs feeding the radiative energy: the decay-rate
/// excess ΔΓ = (7/6)ρα₀Γ₀, the resonance shift Δk_res = −(k₀/6π)α₀²ρ/ξ³,
/// and the Lorentz shift Δk_L = −(1/3)k₀α₀ρ.
pub fn radiative_energy_deltas(rho: f64, alpha0: f64, k0: f64, xi: f64) -> (f64, f64, f64) {
    let gamma0 = C_NM_PER_S * alpha0 * k0.powi(4) / (6.0 * std::f64::consts::PI);
    let d_gamma = 7.0 / 6.0 * rho * alpha0 * gamma0;
    let d_kres = -k0 / (6.0 * std::f64::consts::PI) * alpha0 * alpha0 * rho / xi.powi(3);
    let d_kl = -k0 * alpha0 * rho / 3.0;
    (d_gamma, d_kres, d_kl)
}

/// The radiative energy reassembled from the first-order inputs,
/// (3ħα₀k₀²ρ/64π²)·[Γ₀k₀ + Γ₀(Δk_res + Δk_L) + ΔΓ·k₀], dropping the
/// quadratic cross terms. Matches [`radiative_energy`] identically.
pub fn radiative_energy_two_path(rho: f64, alpha0: f64, k0: f64, xi: f64) -> f64 {
    let gamma0 = C_NM_PER_S * alpha0 * k0.powi(4) / (6.0 * std::f64::consts::PI);
    let (d_gamma, d_kres, d_kl) = radiative_energy_deltas(rho, alpha0, k0, xi);
    3.0 / (64.0 * std::f64::consts::PI.powi(2))
        * HBAR_EV_S
        * alpha0
        * k0
        * k0
        * rho
        * (gamma0 * k0 + gamma0 * (d_kres + d_kl) + d_gamma * k0)
}

/// Radiative pressure and its ratio to the van-der-Waals pressure.
///
/// p_rad = (cħ/128π³) k₀⁷ α₀³ ρ² (5/6 − α₀/(6πξ³)); with the self-energy
/// correction disabled the ratio takes the closed form
/// −(5/128π²) k₀⁶ α₀ ξ³.
pub fn radiative_pressure_with(
    rho: f64,
    alpha0: f64,
    k0: f64,
    xi: f64,
    include_self_term: bool,
) -> (f64, f64) {
    let correction = if include_self_term {
        5.0 / 6.0 - alpha0 / (6.0 * std::f64::consts::PI * xi.powi(3))
    } else {
        5.0 / 6.0
    };
    let p_rad = C_NM_PER_S * HBAR_EV_S / (128.0 * std::f64::consts::PI.powi(3))
        * k0.powi(7)
        * alpha0.powi(3)
        * rho
        * rho
        * correction;
    let (_, p_vdw, _) = vdw_energy_pressure(rho, xi, alpha0, k0);
    (p_rad, p_rad / p_vdw)
}

/// Radiative pressure with the full correction term.
pub fn radiative_pressure(rho: f64, alpha0: f64, k0: f64, xi: f64) -> (f64, f64) {
    radiative_pressure_with(rho, alpha0, k0, xi, true)
}

/// Assemble the complete report for one scenario.
pub fn report(rho: f64, xi: f64, alpha0: f64, k0: f64) -> PressureReport {
    let (f_vdw, p_vdw, a_prime) = vdw_energy_pressure(rho, xi, alpha0, k0);
    let f_rad_diel = radiative_energy(rho, alpha0, k0, xi);
    let (p_rad, ratio) = radiative_pressure(rho, alpha0, k0, xi);
    PressureReport {
        f_vdw,
        p_vdw,
        a_prime,
        f_rad_diel,
        p_rad,
        ratio,
    }
}

/// Pressure from an energy density by the thermodynamic rule
/// p = ρ ∂f/∂ρ − f, the derivative taken by central differences.
pub fn pressure_from_energy<F: Fn(f64) -> f64>(f: F, rho: f64) -> f64 {
    let h = 1e-6 * rho;
    let df = (f(rho + h) - f(rho - h)) / (2.0 * h);
    rho * df - f(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const K0: f64 = 2.0 * PI / 770.0;
    const ALPHA0: f64 = 0.18;
    const XI: f64 = 0.5;

    #[test]
    fn vdw_scaling_and_identity() {
        let (f1, p1, ap) = vdw_energy_pressure(1e-5, XI, ALPHA0, K0);
        let (_, p2, _) = vdw_energy_pressure(2e-5, XI, ALPHA0, K0);
        assert_relative_eq!(p2 / p1, 4.0, max_relative = 1e-12);
        assert!(p1 < 0.0 && f1 < 0.0);
        assert_relative_eq!(
            ap,
            HBARC_EV_NM * K0 * ALPHA0 * ALPHA0 / (6.0 * PI * XI.powi(3)),
            max_relative = 1e-15
        );
        // quadratic f: p = ρ∂f/∂ρ − f = f
        assert_eq!(f1, p1);
        let p_fd = pressure_from_energy(|r| vdw_energy_pressure(r, XI, ALPHA0, K0).0, 1e-5);
        assert_relative_eq!(p_fd, p1, max_relative = 1e-6);
    }

    #[test]
    fn radiative_energy_leading_linear() {
        let f1 = radiative_energy(1e-8, ALPHA0, K0, XI);
        let f2 = radiative_energy(2e-8, ALPHA0, K0, XI);
        assert_relative_eq!(f2 / f1, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn delta_inputs() {
        let rho = 1e-5;
        let (dg, dkr, dkl) = radiative_energy_deltas(rho, ALPHA0, K0, XI);
        let gamma0 = C_NM_PER_S * ALPHA0 * K0.powi(4) / (6.0 * PI);
        assert_relative_eq!(dg, 7.0 / 6.0 * rho * ALPHA0 * gamma0, max_relative = 1e-15);
        assert_relative_eq!(
            dkr,
            -K0 / (6.0 * PI) * ALPHA0 * ALPHA0 * rho / XI.powi(3),
            max_relative = 1e-15
        );
        assert_relative_eq!(dkl, -K0 * ALPHA0 * rho / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn two_path_reassembly() {
        for &rho in &[1e-7, 1e-5, 1e-4] {
            let direct = radiative_energy(rho, ALPHA0, K0, XI);
            let two_path = radiative_energy_two_path(rho, ALPHA0, K0, XI);
            assert_relative_eq!(direct, two_path, max_relative = 1e-10);
        }
    }

    #[test]
    fn ratio_closed_form_and_sign() {
        let rho = 1e-5;
        let (_, ratio) = radiative_pressure_with(rho, ALPHA0, K0, XI, false);
        let closed = -5.0 / (128.0 * PI * PI) * K0.powi(6) * ALPHA0 * XI.powi(3);
        assert_relative_eq!(ratio, closed, max_relative = 1e-10);
        // positive p_rad unless the self term dominates
        let (p, _) = radiative_pressure(rho, ALPHA0, K0, XI);
        assert!(p > 0.0);
        assert!(
            ALPHA0 / (6.0 * PI * XI.powi(3)) < 5.0 / 6.0,
            "scenario unexpectedly in the negative-pressure regime"
        );
        // potassium-like magnitudes: |ratio| far below 1e-12
        assert!(ratio.abs() < 1e-12, "ratio {ratio}");
    }

    #[test]
    fn report_consistency() {
        let r = report(1e-5, XI, ALPHA0, K0);
        assert_relative_eq!(r.ratio * r.p_vdw, r.p_rad, max_relative = 1e-12);
        // pressure rule holds for the radiative branch by finite differences
        let p_fd = pressure_from_energy(|rho| radiative_energy(rho, ALPHA0, K0, XI), 1e-5);
        assert_relative_eq!(p_fd, r.p_rad, max_relative = 1e-4);
    }
}

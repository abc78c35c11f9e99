//! Decay of a weakly-polarizable substantial impurity at the center of a
//! large cavity in an effective medium.
//!
//! The host medium enters only through its dielectric constant ε = 1 + χ
//! and the cavity radius R; the closed forms below are exact to second
//! order in χ and to leading order in k0R. A slow integral path evaluates
//! the underlying k-space integrals with the cavity factors for
//! cross-validation at finite k0R.

use num_complex::Complex64;

use crate::emission::DecayBreakdown;
use crate::error::{Error, Result};
use crate::gamma::{GammaFactors, ZetaComponents};
use crate::quad::{integrate_with_pole, QuadratureSpec};
use crate::special::{cavity_factors, f_zeta};

/// Host dielectric, cavity size parameter k0R and radius R (nm).
#[derive(Debug, Clone, Copy)]
pub struct CavityScenario {
    pub eps: Complex64,
    pub k0r: f64,
    pub r: f64,
}

impl CavityScenario {
    pub fn new(eps: Complex64, k0r: f64, r: f64) -> Self {
        assert!(k0r > 0.0 && r > 0.0);
        Self { eps, k0r, r }
    }

    pub fn k0(&self) -> f64 {
        self.k0r / self.r
    }

    /// The closed forms assume a long-wavelength cavity much larger than
    /// the host correlation length.
    pub fn is_valid(&self, xi: f64) -> bool {
        self.k0r < 0.3 && self.r > 3.0 * xi
    }

    fn check_radius(&self) -> Result<()> {
        let chi = self.eps - 1.0;
        if chi.norm() >= 1.0 {
            return Err(Error::SeriesRadius {
                name: "chi",
                magnitude: chi.norm(),
            });
        }
        Ok(())
    }
}

/// Self-energy factors of the cavity scenario, units k0/2π, divergence-free
/// (the free-space −i is excluded; the zeta field holds k0R).
///
/// Closed forms, to zero order in k0R:
/// 2γ⊥ + γ∥ + i = −i[((ε+2)/3)²√ε − (4/9)(ε−1)²/ε − 1]
///                − (1/(k0R)³ + 1/(k0R))·(ε−1)(ε+2)/(3ε).
///
/// The ζ⁰ transverse/longitudinal split is exact; the absorptive 1/(k0R)
/// order is attributed half-and-half to the two polarizations as in the
/// single-scattering limit, and 1/(k0R)³ fully to the longitudinal one.
pub fn gamma_rc(scn: &CavityScenario) -> Result<GammaFactors> {
    scn.check_radius()?;
    let eps = scn.eps;
    let ll = (eps + 2.0) / 3.0;
    let sq = eps.sqrt();
    let chi = eps - 1.0;
    // longitudinal ζ⁰ piece: −i(ε − (ε−2)²)/9ε
    let par_z0 = -Complex64::I * (eps - (eps - 2.0) * (eps - 2.0)) / (9.0 * eps);
    let total_z0 = -Complex64::I * (ll * ll * sq - 4.0 / 9.0 * chi * chi / eps - 1.0);
    let absorb = chi * (eps + 2.0) / (3.0 * eps);
    let zr = scn.k0r;
    let zm3 = -absorb / (zr * zr * zr);
    let zm1 = -absorb / zr;
    Ok(GammaFactors {
        g_perp2: ZetaComponents {
            z0: total_z0 - par_z0,
            zm1: 0.5 * zm1,
            zm3: Complex64::default(),
        },
        g_par: ZetaComponents {
            z0: par_z0,
            zm1: 0.5 * zm1,
            zm3,
        },
        zeta: zr,
        order_used: 2,
    })
}

/// Decay breakdown of the cavity emitter, normalized by Γ₀.
///
/// coherent = Re√ε·Re{((ε+2)/3)²} − (1/3)Re{ε−1},
/// long_dispersive = Re{(ε−(ε−2)²)/(9ε)},
/// absorptive: −Im√ε·Im{((ε+2)/3)²} at ζ⁰ plus the 1/(k0R) and 1/(k0R)³
/// channels carrying −Im{2(ε−1)²/(3ε) − (ε−1)}. The channel sum equals the
/// total exactly.
pub fn decay_rc(scn: &CavityScenario) -> Result<DecayBreakdown> {
    scn.check_radius()?;
    let eps = scn.eps;
    let ll2 = ((eps + 2.0) / 3.0) * ((eps + 2.0) / 3.0);
    let sq = eps.sqrt();
    let chi = eps - 1.0;
    let coherent = sq.re * ll2.re - chi.re / 3.0;
    let long_dispersive = ((eps - (eps - 2.0) * (eps - 2.0)) / (9.0 * eps)).re;
    let absorptive_z0 = -sq.im * ll2.im;
    let host_absorb = (2.0 * chi * chi / (3.0 * eps) - chi).im;
    let zr = scn.k0r;
    let absorptive_zm1 = -host_absorb / zr;
    let absorptive_zm3 = -host_absorb / (zr * zr * zr);
    Ok(DecayBreakdown {
        coherent,
        long_dispersive,
        absorptive_z0,
        absorptive_zm1,
        absorptive_zm3,
        total: coherent + long_dispersive + absorptive_z0 + absorptive_zm1 + absorptive_zm3,
        renorm_prefactor: Complex64::new(1.0, 0.0),
    })
}

/// Slow validation path: the transverse and longitudinal k-integrals built
/// from the cavity factors, with the susceptibility taken constant at its
/// effective value.
///
/// Returns the total 2γ⊥ + γ∥ + i (divergence-free, units k0/2π) at finite
/// k0R. Quadratic in χ like the closed form, but keeping the full k0R
/// dependence of the cavity factors. Only real ε is supported; the bulk
/// pole then sits on the integration contour and is handled by the
/// principal-value-plus-residue rule.
pub fn gamma_rc_integral(scn: &CavityScenario, quad: &QuadratureSpec) -> Result<Complex64> {
    let eps = scn.eps;
    assert!(
        eps.im == 0.0 && eps.re > 0.0,
        "integral path requires real positive eps"
    );
    let chi = eps - 1.0;
    let k0 = scn.k0();
    let rc = scn.r;
    let pi = std::f64::consts::PI;
    let measure = 1.0 / (2.0 * pi * pi); // d³k/(2π)³ → k²dk/(2π²)
    let kp = eps.sqrt().re * k0; // bulk pole

    let c_perp =
        |k: f64| -> Complex64 { cavity_factors(k, k0, rc, quad).expect("cavity factor").transverse };

    // Transverse part: −2k0²χ∫[C⊥+G⊥⁰]G⊥⁰ + 2k0⁴χ²∫[C⊥+G⊥⁰]²G⊥, with the
    // retarded poles handled by principal value plus residue. The pieces
    // free of C⊥ are analytic:
    //   ∫k² G⊥⁰² dk             = iπ/(4 k0)
    //   ∫k² G⊥⁰ G⊥ dk           = iπ/(2(k0 + kp))
    //   ∫k² G⊥⁰² G⊥ dk          = [iπ/(4k0) − iπ/(2(k0+kp))]/(k0²χ).
    let t1 = integrate_with_pole(|k| k * k * c_perp(k), k0, quad)?;
    let t2 = Complex64::new(0.0, pi / (4.0 * k0));
    let t3 = integrate_with_pole(
        |k| {
            let c = c_perp(k);
            k * k * c * c
        },
        kp,
        quad,
    )?;
    let (t4, t5) = if chi.norm() > 1e-14 {
        // G⊥⁰G⊥ = [G⊥⁰ − G⊥]/(k0²χ) splits T4 into two single-pole pieces.
        let tb = integrate_with_pole(|k| k * k * c_perp(k), kp, quad)?;
        let t4 = (t1 - tb) / (k0 * k0 * chi);
        let t5 = (t2 - Complex64::new(0.0, pi / (2.0 * (k0 + kp)))) / (k0 * k0 * chi);
        (t4, t5)
    } else {
        (Complex64::default(), Complex64::new(0.0, pi / (16.0 * k0.powi(3))))
    };

    let g_perp = -2.0 * k0 * k0 * chi * measure * (t1 + t2)
        + 2.0 * k0.powi(4) * chi * chi * measure * (t3 + 2.0 * t4 + t5);

    // Longitudinal part: G∥⁰ = 1/k0² and G∥ = 1/(εk0²) are constants and
    // [C∥+G∥⁰](k) = −(1/k0²)(j₁(kR)/kR)·f(k0R), so the radial integrals
    // reduce to the Bessel-power forms with Q = kR.
    let f = f_zeta(scn.k0r);
    let q_j1 = crate::gamma::bessel_power_integral(1, crate::gamma::BesselWeight::QSquared, quad)?;
    let q_j2 = crate::gamma::bessel_power_integral(2, crate::gamma::BesselWeight::QSquared, quad)?;
    let r3 = rc * rc * rc;
    let first_par = chi * measure * f * q_j1 / (k0 * k0 * r3);
    let second_par = chi * chi * measure * f * f * q_j2 / (eps * k0 * k0 * r3);

    // convert to units of k0/2π
    Ok((g_perp + first_par + second_par) * (2.0 * pi / k0))
}

//! Self-consistent effective dielectric constant of a Maxwell-Garnett
//! medium.
//!
//! The mixing rule couples ε to the renormalized single-particle
//! polarizability, which itself depends on the self-energy factors
//! evaluated in the medium characterized by ε. The resulting fixed point
//! is solved per wave number by damped Picard iteration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_totals, GammaFactors};
use crate::polarizability::{alpha_in_medium, LorentzOscillator};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Physical scenario: number density ρ (nm⁻³), exclusion length ξ (nm),
/// the single-particle oscillator, and the wave numbers (nm⁻¹) at which the
/// dielectric constant is requested.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MediumSpec {
    pub rho: f64,
    pub xi: f64,
    pub oscillator: LorentzOscillator,
    pub k_grid: Vec<f64>,
}

impl MediumSpec {
    /// A medium denser than one scatterer per exclusion volume is outside
    /// the dilute-exclusion picture.
    pub fn is_dilute(&self) -> bool {
        self.rho * self.xi.powi(3) <= 1.0
    }

    fn validate(&self) -> Result<()> {
        if self.rho <= 0.0 || self.xi <= 0.0 {
            return Err(Error::InvalidConfig(
                "rho and xi must be positive".to_string(),
            ));
        }
        if self.k_grid.is_empty() {
            return Err(Error::InvalidConfig("empty k grid".to_string()));
        }
        Ok(())
    }
}

/// Converged solution over the k grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfConsistentResult {
    /// (k̃, ε) pairs in grid order.
    pub eps_of_k: Vec<(f64, Complex64)>,
    /// Shifted resonance wave number.
    pub k_res: f64,
    /// Renormalized static polarizability α̃₀ = α₀(k₀/k_res)².
    pub alpha0_tilde: f64,
    /// Renormalized radiative width at the shifted resonance, s⁻¹.
    pub gamma_alpha: f64,
    /// Lorentz shift of the dielectric resonance, Δk²_L = −(1/3)α₀k₀²ρ.
    pub lorentz_shift: f64,
    /// Largest fixed-point residual over the grid.
    pub residual: f64,
    /// Largest iteration count over the grid.
    pub iterations: usize,
}

/// One application of the self-consistency map at wave number `ktilde`:
/// χ → γ-factors → α̃ → ε through the mixing rule.
fn mg_map(medium: &MediumSpec, ktilde: f64, eps: Complex64, gamma_on: bool) -> Result<Complex64> {
    let zeta = ktilde * medium.xi;
    let gamma = if gamma_on {
        let chi = eps - 1.0;
        gamma_totals(chi, zeta, 5)?
    } else {
        GammaFactors::zero(zeta)
    };
    let alpha = alpha_in_medium(&medium.oscillator, ktilde, &gamma);
    let ra = medium.rho * alpha;
    Ok(1.0 + ra / (1.0 - ra / 3.0))
}

/// Solve the fixed point at a single wave number.
///
/// Starts with damped Picard steps from the bare mixing-rule value; close
/// to resonance the map derivative exceeds one in modulus and plain (even
/// damped) iteration stalls, so the solve switches to a damped complex
/// secant iteration on the residual G(ε) = F(ε) − ε, which handles the
/// repulsive fixed point.
pub fn solve_epsilon_at(
    medium: &MediumSpec,
    ktilde: f64,
    tol: f64,
    max_iter: usize,
    gamma_on: bool,
) -> Result<(Complex64, f64, usize)> {
    let mut trajectory = Vec::new();
    let residual_of = |eps: Complex64| -> Result<Complex64> {
        Ok(mg_map(medium, ktilde, eps, gamma_on)? - eps)
    };

    // two Picard iterates seed the secant
    let mut e_prev = mg_map(medium, ktilde, Complex64::new(1.0, 0.0), false)?;
    let mut g_prev = residual_of(e_prev)?;
    trajectory.push(e_prev);
    if g_prev.norm() < tol {
        return Ok((e_prev, g_prev.norm(), 1));
    }
    let mut e = e_prev + 0.5 * g_prev;
    let mut g = residual_of(e)?;
    trajectory.push(e);

    for it in 2..=max_iter {
        if g.norm() < tol {
            return Ok((e, g.norm(), it));
        }
        let denom = g - g_prev;
        let mut step = if denom.norm() > 1e-300 {
            -g * (e - e_prev) / denom
        } else {
            g
        };
        // step limiter: never move by more than the current susceptibility
        // scale in one go
        let scale = (e - 1.0).norm().max(1e-3);
        if step.norm() > 2.0 * scale {
            step *= 2.0 * scale / step.norm();
        }
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..12 {
            let e_try = e + lambda * step;
            let g_try = residual_of(e_try)?;
            if g_try.norm() < g.norm() || lambda < 1e-3 {
                e_prev = e;
                g_prev = g;
                e = e_try;
                g = g_try;
                trajectory.push(e);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // fall back to one damped Picard step to shake the iteration
            e_prev = e;
            g_prev = g;
            e += 0.1 * g;
            g = residual_of(e)?;
            trajectory.push(e);
        }
    }
    let res = g.norm();
    if res < tol {
        return Ok((e, res, max_iter));
    }
    Err(Error::SolverDiverged {
        iterations: max_iter,
        residual: res,
        trajectory,
    })
}

/// Result of the resonance root search.
#[derive(Debug, Clone)]
pub struct ResonanceShift {
    pub k_res: f64,
    pub alpha0_tilde: f64,
    /// s⁻¹.
    pub gamma_alpha: f64,
    /// All sign-change brackets found while scanning; the returned root is
    /// the one closest to k₀.
    pub brackets: Vec<(f64, f64)>,
}

/// Root of (k̃/k₀)² − 1 = (1/3)α₀k̃²·Re{2γ⊥+γ∥}(k̃), with the renormalized
/// parameters evaluated at the root.
///
/// `gamma_of_k` supplies the divergence-free factors at each trial wave
/// number. Multiple roots can exist at strong coupling; the scan reports
/// every bracket and refines the one closest to k₀.
pub fn resonance_shift<F>(medium: &MediumSpec, gamma_of_k: F) -> Result<ResonanceShift>
where
    F: Fn(f64) -> Result<GammaFactors>,
{
    let k0 = medium.oscillator.k0;
    let alpha0 = medium.oscillator.alpha0;
    let objective = |kt: f64| -> Result<f64> {
        let g = gamma_of_k(kt)?;
        let re_gamma = (g.total() * kt / (2.0 * std::f64::consts::PI)).re;
        Ok((kt / k0).powi(2) - 1.0 - alpha0 * kt * kt / 3.0 * re_gamma)
    };

    // scan a broad bracket around k0
    let n_scan = 400;
    let lo = 0.5 * k0;
    let hi = 1.5 * k0;
    let mut brackets = Vec::new();
    let mut prev_k = lo;
    let mut prev_f = objective(lo)?;
    for i in 1..=n_scan {
        let k = lo + (hi - lo) * i as f64 / n_scan as f64;
        let f = objective(k)?;
        if prev_f == 0.0 || prev_f.signum() != f.signum() {
            brackets.push((prev_k, k));
        }
        prev_k = k;
        prev_f = f;
    }
    if brackets.is_empty() {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    let (mut a, mut b) = *brackets
        .iter()
        .min_by(|x, y| {
            let dx = (0.5 * (x.0 + x.1) - k0).abs();
            let dy = (0.5 * (y.0 + y.1) - k0).abs();
            dx.total_cmp(&dy)
        })
        .expect("non-empty");
    // bisection to 1e-12 relative, with a secant polish
    let mut fa = objective(a)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = objective(mid)?;
        if fa.signum() == fm.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (b - a) < 1e-13 * k0 {
            break;
        }
    }
    let mut k_res = 0.5 * (a + b);
    let f1 = objective(k_res)?;
    let h = 1e-7 * k0;
    let df = (objective(k_res + h)? - objective(k_res - h)?) / (2.0 * h);
    if df != 0.0 {
        let step = f1 / df;
        if step.abs() < (b - a).max(1e-12 * k0) * 4.0 {
            k_res -= step;
        }
    }

    let alpha0_tilde = alpha0 * (k0 / k_res).powi(2);
    let g = gamma_of_k(k_res)?;
    // Γ_α = −Γ₀ (2π/k₀²) k̃ Im{2γTot⊥+γTot∥}, with the free-space −ik̃/2π
    // restored: Im total = (k̃/2π)(Im ĝ − 1).
    let gamma0 = medium.oscillator.gamma0;
    let gamma_alpha = gamma0 * (k_res / k0).powi(2) * (1.0 - g.total().im);
    Ok(ResonanceShift {
        k_res,
        alpha0_tilde,
        gamma_alpha,
        brackets,
    })
}

/// Solve the self-consistent dielectric constant over the whole k grid.
///
/// Grid points are independent; with the `parallel` feature they are
/// solved concurrently and re-assembled in grid order, so parallel and
/// serial runs produce identical output.
pub fn solve_epsilon(medium: &MediumSpec, tol: f64, max_iter: usize) -> Result<SelfConsistentResult> {
    solve_epsilon_with(medium, tol, max_iter, true)
}

/// Like [`solve_epsilon`] with the medium self-energy factors optionally
/// forced to zero, which reduces the model to the bare mixing rule with
/// only the Lorentz shift.
pub fn solve_epsilon_with(
    medium: &MediumSpec,
    tol: f64,
    max_iter: usize,
    gamma_on: bool,
) -> Result<SelfConsistentResult> {
    medium.validate()?;
    if tol <= 0.0 {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }

    let solve_one = |&kt: &f64| -> Result<(f64, Complex64, f64, usize)> {
        let (eps, res, it) = solve_epsilon_at(medium, kt, tol, max_iter, gamma_on)?;
        Ok((kt, eps, res, it))
    };

    #[cfg(feature = "parallel")]
    let rows: Result<Vec<_>> = medium.k_grid.par_iter().map(solve_one).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<_>> = medium.k_grid.iter().map(solve_one).collect();
    let rows = rows?;

    let residual = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let iterations = rows.iter().map(|r| r.3).max().unwrap_or(0);
    let eps_of_k: Vec<(f64, Complex64)> = rows.iter().map(|r| (r.0, r.1)).collect();

    let shift = resonance_shift(medium, |kt| {
        if !gamma_on {
            return Ok(GammaFactors::zero(kt * medium.xi));
        }
        let (eps, _, _) = solve_epsilon_at(medium, kt, tol, max_iter, gamma_on)?;
        gamma_totals(eps - 1.0, kt * medium.xi, 5)
    })?;

    let k0 = medium.oscillator.k0;
    Ok(SelfConsistentResult {
        eps_of_k,
        k_res: shift.k_res,
        alpha0_tilde: shift.alpha0_tilde,
        gamma_alpha: shift.gamma_alpha,
        lorentz_shift: -medium.oscillator.alpha0 * k0 * k0 * medium.rho / 3.0,
        residual,
        iterations,
    })
}

/// Hot potassium vapor on its D1 line: λ₀ = 770.1 nm, oscillator strength
/// f = 0.339, α₀ = f·4π r_e/k₀² ≈ 0.18 nm³, exclusion length 0.5 nm (the
/// cold-gas van-der-Waals radius; override for collisional conditions).
///
/// The default density 1e-5 nm⁻³ sits mid-range of 2·10⁻⁷..10⁻⁴ nm⁻³
/// (2·10²⁰..10²³ m⁻³); the default k grid samples symmetric log-spaced
/// detunings outside the opaque core of the line.
pub fn potassium_preset() -> MediumSpec {
    let lambda0 = 770.1;
    let k0 = 2.0 * std::f64::consts::PI / lambda0;
    let r_e = 2.82e-6; // classical electron radius, nm
    let f = 0.339;
    let alpha0 = f * 4.0 * std::f64::consts::PI * r_e / (k0 * k0);
    let oscillator = LorentzOscillator::from_alpha0(alpha0, k0);
    let mut k_grid = Vec::new();
    for &d in &[1e-2, 3e-3, 1e-3, 3e-4, 1e-4] {
        k_grid.push(k0 * (1.0 - d));
        k_grid.push(k0 * (1.0 + d));
    }
    k_grid.sort_by(f64::total_cmp);
    MediumSpec {
        rho: 1e-5,
        xi: 0.5,
        oscillator,
        k_grid,
    }
}

/// Density range of the potassium scenario, nm⁻³.
pub const POTASSIUM_RHO_RANGE: (f64, f64) = (2e-7, 1e-4);

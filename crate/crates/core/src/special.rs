//! Special functions, free-space propagators and cavity factors.
//!
//! The free dyadic Green function is split into an electrostatic part
//! $G_{stat}(r) = [k_0^{-2}\nabla\otimes\nabla](-1/4\pi r)$ and a radiative
//! part carrying the outgoing phase. In reciprocal space the pair reduces to
//! the transverse and longitudinal scalars $1/(k_0^2-k^2)$ and $1/k_0^2$.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureSpec};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Transverse/longitudinal scalar pair, units of length².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorPair {
    pub transverse: Complex64,
    pub longitudinal: Complex64,
}

/// Spherical Bessel function j₁(x) = sin x/x² − cos x/x.
///
/// Switches to the Taylor series below |x| = 1e-2 to avoid cancellation.
pub fn spherical_bessel_j1(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
    } else {
        x.sin() / (x * x) - x.cos() / x
    }
}

/// j₁(x)/x, continuous at the origin where it tends to 1/3.
pub fn j1_over_x(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0))) / 3.0
    } else {
        spherical_bessel_j1(x) / x
    }
}

/// Exclusion-volume structure factor h(Q) = −4πξ³ j₁(Q)/Q, units length³.
///
/// Q is the dimensionless momentum transfer |k' − k|ξ. The Q → 0 limit is
/// minus the exclusion-sphere volume, −(4π/3)ξ³.
pub fn structure_factor_h(q: f64, xi: f64) -> f64 {
    -FOUR_PI * xi * xi * xi * j1_over_x(q)
}

/// Closed-form factor f(ζ) = 2i e^{iζ}(i + ζ) from the longitudinal
/// exclusion-volume convolution.
pub fn f_zeta(zeta: f64) -> Complex64 {
    2.0 * Complex64::I * Complex64::new(0.0, zeta).exp() * Complex64::new(zeta, 1.0)
}

/// Free-space propagator pair G⊥(k) = 1/(k0² − k²), G∥(k) = 1/k0².
///
/// The pole shell k = k0 is the caller's business (contour or residue
/// rules); evaluation inside the guard band is an error.
pub fn free_propagators(k: f64, k0: f64) -> Result<PropagatorPair> {
    assert!(k0 > 0.0 && k >= 0.0);
    if (k - k0).abs() <= 1e-8 * k0 {
        return Err(Error::PoleEvaluation { k, k0 });
    }
    Ok(PropagatorPair {
        transverse: Complex64::new(1.0 / (k0 * k0 - k * k), 0.0),
        longitudinal: Complex64::new(1.0 / (k0 * k0), 0.0),
    })
}

/// Series for u(x) = (ix − 1)e^{ix} + 1 = Σ_{n≥2} (n−1)/n! (ix)ⁿ, accurate
/// for small |x| where the closed form cancels.
fn u_of(x: f64) -> Complex64 {
    if x.abs() < 0.5 {
        let ix = Complex64::new(0.0, x);
        let mut term = ix * ix / 2.0; // n = 2: (ix)²·(1/2!)
        let mut sum = term;
        for n in 3..=16u32 {
            // (n−1)/n! = prev · (ix) · (n−1)/(n·(n−2))
            term *= ix * ((n - 1) as f64) / ((n as f64) * ((n - 2) as f64));
            sum += term;
        }
        sum
    } else {
        let e = Complex64::new(0.0, x).exp();
        (Complex64::new(-1.0, x)) * e + 1.0
    }
}

/// Series for w(x) = x²e^{ix} + 2u(x) = Σ_{m≥3} (m−1)(2−m)/m! (ix)^m.
fn w_of(x: f64) -> Complex64 {
    if x.abs() < 0.5 {
        let ix = Complex64::new(0.0, x);
        let mut pw = ix * ix * ix;
        let mut fact = 6.0; // 3!
        let mut sum = pw * (2.0 * (2.0 - 3.0) / fact);
        for m in 4..=18u32 {
            pw *= ix;
            fact *= m as f64;
            let c = ((m - 1) as f64) * (2.0 - m as f64) / fact;
            sum += pw * c;
        }
        sum
    } else {
        let e = Complex64::new(0.0, x).exp();
        e.scale(x * x) + 2.0 * u_of(x)
    }
}

/// Radial scalars (A, B) of the full dyadic Green function,
/// G(r) = A(r)(𝕀 − r̂⊗r̂) + B(r) r̂⊗r̂, units 1/length.
pub fn green_scalars(r: f64, k0: f64) -> (Complex64, Complex64) {
    let (ar, br) = green_scalars_radiative(r, k0);
    let s = 1.0 / (FOUR_PI * k0 * k0 * r * r * r);
    (ar + s, br - 2.0 * s)
}

/// Radial scalars of the radiative part alone (electrostatic 1/r³ dipole
/// field removed).
pub fn green_scalars_radiative(r: f64, k0: f64) -> (Complex64, Complex64) {
    let x = k0 * r;
    let e = Complex64::new(0.0, x).exp();
    let u = u_of(x);
    let w = w_of(x);
    // h(r) = −(e^{ik0r} − 1)/(4πr);  h' = −u/(4πr²);  h'' = w/(4πr³).
    let a = -e / (FOUR_PI * r) - u / (FOUR_PI * k0 * k0 * r * r * r);
    let b = -e / (FOUR_PI * r) + w / (FOUR_PI * k0 * k0 * r * r * r);
    (a, b)
}

/// Full free-space dyadic Green function at separation `r`, units 1/length.
///
/// Sum of the electrostatic dipole propagator and the radiation propagator;
/// Im Tr G → −k0/2π as r → 0, and the far field is
/// −e^{ik0 r}/(4πr)·(𝕀 − r̂⊗r̂) up to O(1/r²).
pub fn dyadic_green(r: [f64; 3], k0: f64) -> Result<[[Complex64; 3]; 3]> {
    let rr = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if rr == 0.0 {
        return Err(Error::SingularOrigin);
    }
    let (a, b) = green_scalars(rr, k0);
    let n = [r[0] / rr, r[1] / rr, r[2] / rr];
    let mut g = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut v = (b - a) * n[i] * n[j];
            if i == j {
                v += a;
            }
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// Trace of the dyadic Green function, −e^{ik0 r}/(2πr).
pub fn dyadic_green_trace(r: f64, k0: f64) -> Complex64 {
    -Complex64::new(0.0, k0 * r).exp() / (2.0 * std::f64::consts::PI * r)
}

// Angular moments: j0(x) = ∫₀¹cos(xu)du, m2(x) = ∫₀¹u²cos(xu)du.
fn j0(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

fn m2(x: f64) -> f64 {
    if x.abs() < 5e-2 {
        let x2 = x * x;
        1.0 / 3.0 - x2 / 10.0 + x2 * x2 / 168.0 - x2 * x2 * x2 / 6480.0
    } else {
        ((x * x - 2.0) * x.sin() + 2.0 * x * x.cos()) / (x * x * x)
    }
}

/// 3m₂(x) − j₀(x), evaluated by series at small x where the leading terms
/// cancel to O(x²).
fn three_m2_minus_j0(x: f64) -> f64 {
    if x.abs() < 0.3 {
        let x2 = x * x;
        (-2.0 / 15.0 + x2 / 105.0 - x2 * x2 / 3780.0 + x2 * x2 * x2 / 249_480.0) * x2
    } else {
        3.0 * m2(x) - j0(x)
    }
}

/// Cavity factors (C⊥(k), C∥(k)) of a spherical exclusion volume of radius
/// `R`: the convolution of the exclusion correlation −Θ(R − r) with the
/// free dyadic propagator, projected transverse/longitudinal to `k`.
///
/// The 3D convolution is reduced analytically to a radial integral over the
/// cavity. The electrostatic 1/r³ piece is grouped with its angular factor,
/// whose O(x²) zero keeps the integrand finite at the origin; its contact
/// part δ³(r)𝕀/(3k₀²) contributes −1/(3k₀²) to each component, which is
/// why the factors stay finite as R → 0.
pub fn cavity_factors(k: f64, k0: f64, r_cavity: f64, quad: &QuadratureSpec) -> Result<PropagatorPair> {
    assert!(r_cavity > 0.0 && k0 > 0.0 && k >= 0.0);
    let stat = |r: f64| 1.0 / (FOUR_PI * k0 * k0 * r * r * r);
    let contact = -1.0 / (3.0 * k0 * k0);

    let perp = integrate(
        |r| {
            let x = k * r;
            let (a, b) = green_scalars_radiative(r, k0);
            let rad = a * (j0(x) + m2(x)) + b * (j0(x) - m2(x));
            let st = stat(r) * three_m2_minus_j0(x);
            (rad + st) * (r * r)
        },
        0.0,
        r_cavity,
        quad,
    )?;
    let par = integrate(
        |r| {
            let x = k * r;
            let (a, b) = green_scalars_radiative(r, k0);
            let rad = a * (j0(x) - m2(x)) + b * m2(x);
            let st = -stat(r) * three_m2_minus_j0(x);
            (rad + st) * (r * r)
        },
        0.0,
        r_cavity,
        quad,
    )?;
    Ok(PropagatorPair {
        transverse: -2.0 * std::f64::consts::PI * perp + contact,
        longitudinal: -FOUR_PI * par + contact,
    })
}

/// Closed form of the longitudinal cavity factor,
/// C∥(k) = −k0⁻²[1 + (j₁(kR)/kR)·f(k0R)].
pub fn cavity_factor_par_closed(k: f64, k0: f64, r_cavity: f64) -> Complex64 {
    let f = f_zeta(k0 * r_cavity);
    -(Complex64::new(1.0, 0.0) + f * j1_over_x(k * r_cavity)) / (k0 * k0)
}

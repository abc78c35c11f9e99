use num_complex::Complex64;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A free propagator was evaluated on the pole shell k = k0.
    #[error("transverse propagator evaluated on the pole shell |k - k0| < guard (k = {k}, k0 = {k0})")]
    PoleEvaluation { k: f64, k0: f64 },

    /// The dyadic Green function was requested at zero separation.
    #[error("dyadic Green function is singular at the origin")]
    SingularOrigin,

    /// A quadrature did not reach the requested tolerance.
    #[error("quadrature failed to converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// The integrand returned a non-finite value.
    #[error("integrand returned a non-finite value at {at}")]
    InvalidIntegrand { at: f64 },

    /// A multiple-scattering series was evaluated outside its convergence disk.
    #[error("series argument |{name}| = {magnitude:.4} is outside the convergence disk (radius 1)")]
    SeriesRadius { name: &'static str, magnitude: f64 },

    /// Electrostatic sphere polarizability pole at eps = -2.
    #[error("electrostatic polarizability pole: eps_e = -2")]
    PlasmonPole,

    /// Onsager empty-cavity factor pole at Re eps = -1/2.
    #[error("empty-cavity factor pole: 2 Re eps + 1 = 0")]
    EmptyCavityPole,

    /// Division by a vanishing coupling.
    #[error("division by zero: {0}")]
    ZeroDivision(&'static str),

    /// Root bracketing failed.
    #[error("no root in bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    /// A fixed-point solve ran out of iterations; the trajectory is attached
    /// for diagnosis.
    #[error("fixed-point iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    SolverDiverged {
        iterations: usize,
        residual: f64,
        trajectory: Vec<Complex64>,
    },

    /// Rejection sampling stalled; the requested density is too high.
    #[error("configuration sampling stalled after {attempts} attempts ({placed}/{requested} placed); density too high")]
    SamplingStall {
        attempts: usize,
        placed: usize,
        requested: usize,
    },

    /// The coupled-dipole matrix is numerically singular.
    #[error("coupled-dipole system is singular (condition estimate {cond_estimate:.3e})")]
    SingularSystem { cond_estimate: f64 },

    /// Too many ensemble members failed to solve.
    #[error("{failed} of {total} ensemble samples failed to solve (limit 5%)")]
    TooManyFailures { failed: usize, total: usize },

    /// Invalid input configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

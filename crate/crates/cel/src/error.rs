//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its admissible range. `name` is the
    /// CLI-facing symbol of the field (`A`, `kappa`, `Omega`, `gamma`,
    /// `Gamma`, `theta`).
    #[error("invalid parameter `{name}`: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The relaxation-rate radicand vanished and strict mode was requested.
    /// The default path perturbs the radicand instead and flags the result.
    #[error("degenerate spectrum: |discriminant| = {discriminant:e} below tolerance {tolerance:e}")]
    DegenerateSpectrum { discriminant: f64, tolerance: f64 },

    /// Moments grow exponentially and the requested time would overflow f64.
    #[error("unstable moments: growth exponent {exponent:.1} at t = {t} exceeds the overflow horizon {horizon}")]
    NumericalInstability { t: f64, exponent: f64, horizon: f64 },

    /// Closed-form intermediates failed the realness check.
    #[error("imaginary residual {magnitude:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidual { magnitude: f64, tolerance: f64 },

    /// Integrator step too coarse for the fastest rate in the system.
    #[error("step too large: dt = {dt} times the fastest rate {max_rate} exceeds {limit}")]
    StepTooLarge { dt: f64, max_rate: f64, limit: f64 },

    /// Drift matrix is singular at the instability threshold; no steady state.
    #[error("singular drift matrix (det = {det:e}): steady state undefined at threshold")]
    SingularDrift { det: f64 },

    /// Population reached the highest retained Fock level.
    #[error("Fock cutoff exceeded at t = {t}: tail occupancy {tail:e} > {tolerance:e}")]
    CutoffExceeded { t: f64, tail: f64, tolerance: f64 },

    #[error("unknown preset `{0}` (expected fig1..fig12)")]
    UnknownPreset(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code class: 2 for validation problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::UnknownPreset(_)
            | Error::InvalidGrid(_)
            | Error::Io { .. }
            | Error::Parse(_) => 2,
            Error::DegenerateSpectrum { .. }
            | Error::NumericalInstability { .. }
            | Error::ImaginaryResidual { .. }
            | Error::StepTooLarge { .. }
            | Error::SingularDrift { .. }
            | Error::CutoffExceeded { .. } => 3,
        }
    }
}

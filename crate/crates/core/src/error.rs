use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("wavelength {lambda_nm:.2} nm outside the valid range [{min_nm:.1}, {max_nm:.1}] nm of material '{material}'")]
    OutOfRange {
        material: String,
        lambda_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    #[error("finite-difference derivatives unstable: Richardson estimates disagree by {relative:.3e} (limit {limit:.1e})")]
    NumericalInstability { relative: f64, limit: f64 },

    #[error("no quasi-phase-matching solution: required grating vector {k_g:.4e} rad/m is not positive")]
    NoSolution { k_g: f64 },

    #[error("gain {gain} is at or above the oscillation threshold pi/2")]
    AboveThreshold { gain: f64 },

    #[error("coefficients violate unitarity: residual {residual:.3e} exceeds {limit:.1e}")]
    InvalidCoeffs { residual: f64, limit: f64 },

    #[error("quadrature failed: error estimate {error_estimate:.3e} above tolerance after {panels} panels")]
    QuadratureFailure { error_estimate: f64, panels: usize },

    #[error("spectrum does not cross the shot-noise level on the scanned grid")]
    NoCrossing,

    #[error("bracket [{a:.6e}, {b:.6e}] does not straddle a sign change")]
    BadBracket { a: f64, b: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("material data: {0}")]
    MaterialData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Quantum noise observables of twin beams generated by parametric
//! down-conversion in a periodically poled slab, below the oscillation
//! threshold of the mirrorless (counter-propagating) configuration.
//!
//! The crate computes, for both the counter-propagating and the single-pass
//! co-propagating geometry:
//!
//! * intensity spectra `|V_s(Omega)|^2` of the down-converted light,
//! * quadrature squeezing spectra at optimal or fixed phase angles,
//! * the intensity-difference noise spectrum and its shot-noise ratio,
//! * the variance of the photon-number difference versus detection time,
//! * second-order field correlations and their spontaneous-regime limits.
//!
//! Everything is built on the Bogoliubov input-output coefficients of the
//! slab ([`gain`]), which in turn need the material dispersion data and the
//! quasi-phase-matching solution ([`material`], [`dispersion`]). Shared
//! numerical kernels (adaptive quadrature, Fourier transforms of spectral
//! densities, root bracketing) live in [`numerics`].

pub mod dispersion;
mod error;
pub mod gain;
pub mod intensity_noise;
pub mod material;
pub mod numerics;
pub mod spectra;
pub mod squeeze_algebra;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Oscillation threshold of the counter-propagating configuration,
/// `g_thr = pi/2`.
pub const GAIN_THRESHOLD: f64 = std::f64::consts::FRAC_PI_2;

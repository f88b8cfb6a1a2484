//! Bogoliubov input-output coefficients of the slab for both geometries,
//! and the squeeze parameters they encode.

use num_complex::Complex64;

use crate::dispersion::{Geometry, InteractionConfig, Mismatch, MismatchMode, Timescales};
use crate::material::MaterialDispersion;
use crate::numerics::{cosh_sqrt, sinc, sinhc_sqrt};
use crate::{Error, Result, GAIN_THRESHOLD};

/// The four coefficients of the input-output transformation at one frequency
/// offset: `u_s = U_s(Omega)`, `v_s = V_s(Omega)`, and the conjugate-pair
/// partners `u_i = U_i(-Omega)`, `v_i = V_i(-Omega)`.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovCoeffs {
    pub omega: f64,
    pub u_s: Complex64,
    pub v_s: Complex64,
    pub u_i: Complex64,
    pub v_i: Complex64,
}

impl BogoliubovCoeffs {
    /// Largest violation of the unitarity conditions:
    /// `|U_j|^2 - |V_j|^2 = 1` and `U_s(O) V_i(-O) = U_i(-O) V_s(O)`.
    pub fn unitarity_residual(&self) -> f64 {
        let r1 = (self.u_s.norm_sqr() - self.v_s.norm_sqr() - 1.0).abs();
        let r2 = (self.u_i.norm_sqr() - self.v_i.norm_sqr() - 1.0).abs();
        let cross = self.u_s * self.v_i - self.u_i * self.v_s;
        let scale = (self.u_s * self.v_i).norm().max(1.0);
        r1.max(r2).max(cross.norm() / scale)
    }
}

/// Squeeze parameter and angle extracted from one coefficient set.
#[derive(Debug, Clone, Copy)]
pub struct SqueezeParams {
    pub r: f64,
    /// Quadrature angle of maximal noise reduction, reduced to `[0, pi)`.
    pub theta: f64,
    /// Set when `V = 0`: `r = 0` and the angle is conventionally 0.
    pub degenerate: bool,
}

const UNITARITY_LIMIT: f64 = 1e-8;

/// `cosh r = |u_s|`, `sinh r = |v_s|`, `2 theta = arg(u_s v_i)`.
pub fn squeeze_params(c: &BogoliubovCoeffs) -> Result<SqueezeParams> {
    let residual = c.unitarity_residual();
    if residual > UNITARITY_LIMIT {
        return Err(Error::InvalidCoeffs {
            residual,
            limit: UNITARITY_LIMIT,
        });
    }
    let r = c.v_s.norm().asinh();
    if c.v_s.norm() == 0.0 {
        return Ok(SqueezeParams {
            r: 0.0,
            theta: 0.0,
            degenerate: true,
        });
    }
    let theta = ((c.u_s * c.v_i).arg() / 2.0).rem_euclid(std::f64::consts::PI);
    Ok(SqueezeParams {
        r,
        theta,
        degenerate: false,
    })
}

/// Counter-propagating (mirrorless-oscillator) coefficients at offset `omega`.
///
/// With `d = D(Omega) l_c / 2` and `gamma = sqrt(g^2 + d^2)`:
///
/// ```text
/// phi  = 1 / (cos gamma - i d sinc gamma)
/// U_s  = e^{i k_s l_c} e^{i beta} phi         V_s = e^{i (k_s - k_i) l_c} g e^{i phi_p} sinc(gamma) phi
/// U_i  = e^{i k_i l_c} e^{i beta} phi*        V_i = g e^{i phi_p} sinc(gamma) phi*
/// ```
pub fn mopo_coefficients(
    omega: f64,
    config: &InteractionConfig,
    mismatch: &Mismatch,
) -> Result<BogoliubovCoeffs> {
    if config.gain >= GAIN_THRESHOLD {
        return Err(Error::AboveThreshold { gain: config.gain });
    }
    Ok(mopo_coefficients_inner(
        omega,
        config.gain,
        config.pump_phase,
        config.crystal_length,
        mismatch,
        true,
    ))
}

fn mopo_coefficients_inner(
    omega: f64,
    gain: f64,
    pump_phase: f64,
    crystal_length: f64,
    mismatch: &Mismatch,
    include_beta: bool,
) -> BogoliubovCoeffs {
    let d = mismatch.d_half(omega);
    let beta = if include_beta { mismatch.beta(omega) } else { 0.0 };
    let gamma = gain.hypot(d);
    let sinc_g = sinc(gamma);
    let phi = Complex64::new(gamma.cos(), -d * sinc_g).inv();
    let ks_lc = mismatch.k_s * crystal_length;
    let ki_lc = mismatch.k_i * crystal_length;
    let v_mag = gain * sinc_g;
    let u_s = Complex64::from_polar(1.0, ks_lc + beta) * phi;
    let v_s = Complex64::from_polar(v_mag, ks_lc - ki_lc + pump_phase) * phi;
    let u_i = Complex64::from_polar(1.0, ki_lc + beta) * phi.conj();
    let v_i = Complex64::from_polar(v_mag, pump_phase) * phi.conj();
    BogoliubovCoeffs {
        omega,
        u_s,
        v_s,
        u_i,
        v_i,
    }
}

/// Single-pass co-propagating coefficients at offset `omega`.
///
/// Canonical parametric-amplifier solution with `delta = Delta(Omega) l_c/2`
/// and `Gamma = sqrt(g^2 - delta^2)` continued through the branch point:
///
/// ```text
/// U_s = e^{i[(k_p - k_G) l_c/2 + chi]} (cosh Gamma + i delta sinhc Gamma)
/// V_s = e^{i[(k_p - k_G) l_c/2 + chi]} e^{i phi_p} g sinhc Gamma
/// ```
///
/// with `chi = [k_s(Omega) - k_i(-Omega)] l_c/2`; `U_i`, `V_i` carry `-chi`.
/// The phase convention fixes `2 theta(0) = (k_p - k_G) l_c + phi_p`; both
/// unitarity conditions hold for every `Omega`.
pub fn copro_coefficients(
    omega: f64,
    config: &InteractionConfig,
    mismatch: &Mismatch,
) -> Result<BogoliubovCoeffs> {
    if config.gain < 0.0 {
        return Err(Error::InvalidConfig("gain must be non-negative".into()));
    }
    Ok(copro_coefficients_inner(
        omega,
        config.gain,
        config.pump_phase,
        config.crystal_length,
        mismatch,
    ))
}

fn copro_coefficients_inner(
    omega: f64,
    gain: f64,
    pump_phase: f64,
    crystal_length: f64,
    mismatch: &Mismatch,
) -> BogoliubovCoeffs {
    let delta = mismatch.delta_half(omega);
    let chi = mismatch.chi(omega);
    // w = Gamma^2 keeps the trigonometric/hyperbolic continuation real.
    let w = gain * gain - delta * delta;
    let ch = cosh_sqrt(w);
    let shc = sinhc_sqrt(w);
    let bracket = Complex64::new(ch, delta * shc);
    let common = (mismatch.k_p - mismatch.k_g) * crystal_length / 2.0;
    // shc changes sign in the trigonometric region; the sign is a physical
    // pi phase flip of V.
    let v_amp = Complex64::from_polar(1.0, pump_phase) * (gain * shc);
    let e_plus = Complex64::from_polar(1.0, common + chi);
    let e_minus = Complex64::from_polar(1.0, common - chi);
    BogoliubovCoeffs {
        omega,
        u_s: e_plus * bracket,
        v_s: e_plus * v_amp,
        u_i: e_minus * bracket,
        v_i: e_minus * v_amp,
    }
}

/// A configured interaction that evaluates coefficients at any offset.
///
/// Construction validates the configuration once; evaluation is then
/// infallible and side-effect free, so grids may be filled concurrently.
#[derive(Debug, Clone)]
pub struct CoeffProvider {
    config: InteractionConfig,
    mismatch: Mismatch,
    include_beta: bool,
}

impl CoeffProvider {
    pub fn new(
        config: InteractionConfig,
        material: &MaterialDispersion,
        mode: MismatchMode,
    ) -> Result<Self> {
        config.validate()?;
        let mismatch = Mismatch::new(&config, material, mode)?;
        // Exact-mode Sellmeier evaluations stay inside the declared range for
        // every offset the library sweeps.
        mismatch.check_offset_range(2000.0 * mismatch.scales.omega_gvs)?;
        Ok(CoeffProvider {
            config,
            mismatch,
            include_beta: true,
        })
    }

    /// Disables the propagation phase `beta(Omega)` in the counter-geometry
    /// coefficients, reproducing the `beta ~ 0` approximation.
    pub fn without_beta(mut self) -> Self {
        self.include_beta = false;
        self
    }

    pub fn coeffs(&self, omega: f64) -> BogoliubovCoeffs {
        match self.config.geometry {
            Geometry::Counter => mopo_coefficients_inner(
                omega,
                self.config.gain,
                self.config.pump_phase,
                self.config.crystal_length,
                &self.mismatch,
                self.include_beta,
            ),
            Geometry::Co => copro_coefficients_inner(
                omega,
                self.config.gain,
                self.config.pump_phase,
                self.config.crystal_length,
                &self.mismatch,
            ),
        }
    }

    pub fn config(&self) -> &InteractionConfig {
        &self.config
    }

    pub fn geometry(&self) -> Geometry {
        self.config.geometry
    }

    pub fn gain(&self) -> f64 {
        self.config.gain
    }

    pub fn timescales(&self) -> &Timescales {
        &self.mismatch.scales
    }

    pub fn mismatch(&self) -> &Mismatch {
        &self.mismatch
    }

    pub fn near_threshold(&self) -> bool {
        self.config.near_threshold()
    }

    /// Frequency scale of the geometry's emission: `Omega_gvs` for counter,
    /// `Omega_gvd` for co.
    pub fn frequency_scale(&self) -> f64 {
        match self.config.geometry {
            Geometry::Counter => self.mismatch.scales.omega_gvs,
            Geometry::Co => self.mismatch.scales.omega_gvd,
        }
    }

    /// Fixed-angle default `phi_s + phi_i = 2 theta(0)`, taken from the
    /// coefficients at zero offset rather than the analytic phase so the
    /// exact-dispersion mode stays self-consistent.
    pub fn phi_sum_at_zero(&self) -> f64 {
        let c = self.coeffs(0.0);
        (c.u_s * c.v_i).arg()
    }

    /// Squeeze parameters at one offset.
    pub fn squeeze_at(&self, omega: f64) -> Result<SqueezeParams> {
        squeeze_params(&self.coeffs(omega))
    }
}

//! Intensity and quadrature-squeezing spectra on frequency grids, with
//! bandwidth extraction.

use num_complex::Complex64;

use crate::dispersion::{Geometry, MismatchMode};
use crate::gain::CoeffProvider;
use crate::numerics::find_root;
use crate::{Error, Result};

/// A frequency grid with named real-valued series, carrying both the
/// absolute axis (rad/s) and the geometry's normalized axis.
#[derive(Debug, Clone)]
pub struct SpectrumSeries {
    pub omega: Vec<f64>,
    pub omega_normalized: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
}

impl SpectrumSeries {
    fn new(omega: Vec<f64>, scale: f64) -> Self {
        let omega_normalized = omega.iter().map(|w| w / scale).collect();
        SpectrumSeries {
            omega,
            omega_normalized,
            series: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        assert_eq!(values.len(), self.omega.len());
        self.series.push((name.into(), values));
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

/// Symmetric uniform grid over `+-span` in units of the provider's
/// frequency scale.
pub fn frequency_grid(provider: &CoeffProvider, span_normalized: f64, points: usize) -> Vec<f64> {
    let scale = provider.frequency_scale();
    let half = span_normalized * scale;
    (0..points)
        .map(|i| -half + 2.0 * half * i as f64 / (points - 1) as f64)
        .collect()
}

/// Default plotting grid: `|Omega| <= 6 Omega_gvs` with 2048 points for the
/// counter geometry, `|Omega| <= 3 Omega_gvd` with 4096 points for co.
pub fn default_grid(provider: &CoeffProvider) -> Vec<f64> {
    match provider.geometry() {
        Geometry::Counter => frequency_grid(provider, 6.0, 2048),
        Geometry::Co => frequency_grid(provider, 3.0, 4096),
    }
}

/// Spectral density `|V_s(Omega)|^2`, raw and peak-normalized.
pub fn intensity_spectrum(grid: &[f64], provider: &CoeffProvider) -> SpectrumSeries {
    let mut out = SpectrumSeries::new(grid.to_vec(), provider.frequency_scale());
    let values: Vec<f64> = grid.iter().map(|&w| provider.coeffs(w).v_s.norm_sqr()).collect();
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    let normalized = if peak > 0.0 {
        values.iter().map(|v| v / peak).collect()
    } else {
        vec![0.0; values.len()]
    };
    out.push("value", values);
    out.push("value_normalized", normalized);
    out
}

/// Phase-angle policy for the squeezing spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseMode {
    /// `phi_s + phi_i = 2 theta(Omega)` per grid point: the spectrum reaches
    /// its floor `e^{-2r(Omega)}` everywhere.
    Optimal,
    /// Fixed phase sum; `None` takes `2 theta(0)` from the coefficients.
    Fixed { phi_sum: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseChoice {
    pub mode: PhaseMode,
    /// Detection delay applied to the back-propagating beam before the
    /// quadratures are combined; compensates a group-velocity mismatch when
    /// set to `tau_gvm`.
    pub delay: f64,
}

impl PhaseChoice {
    pub fn optimal() -> Self {
        PhaseChoice {
            mode: PhaseMode::Optimal,
            delay: 0.0,
        }
    }

    pub fn fixed_default() -> Self {
        PhaseChoice {
            mode: PhaseMode::Fixed { phi_sum: None },
            delay: 0.0,
        }
    }

    pub fn fixed(phi_sum: f64) -> Self {
        PhaseChoice {
            mode: PhaseMode::Fixed {
                phi_sum: Some(phi_sum),
            },
            delay: 0.0,
        }
    }
}

/// Single-sideband noise `F(Omega) = |U_s(Omega) - V_i*(-Omega) e^{i phi}|^2`
/// with an optional detection delay on the idler contribution.
fn sideband_noise(provider: &CoeffProvider, omega: f64, phi_sum: f64, delay: f64) -> f64 {
    let c = provider.coeffs(omega);
    let rotated = c.v_i.conj() * Complex64::from_polar(1.0, phi_sum + omega * delay);
    (c.u_s - rotated).norm_sqr()
}

/// Squeezing spectrum `Sigma(Omega) = [F(Omega) + F(-Omega)] / 2`, shot
/// noise at 1.
///
/// In optimal mode the series is the floor `e^{-2 r}` (with the
/// anti-squeezed counterpart as a second series); in fixed mode the phase
/// sum defaults to `2 theta(0)`.
pub fn squeezing_spectrum(
    grid: &[f64],
    provider: &CoeffProvider,
    phase: &PhaseChoice,
) -> SpectrumSeries {
    let mut out = SpectrumSeries::new(grid.to_vec(), provider.frequency_scale());
    match phase.mode {
        PhaseMode::Optimal => {
            let floor_at = |w: f64| {
                let r = provider.coeffs(w).v_s.norm().asinh();
                ((-2.0 * r).exp(), (2.0 * r).exp())
            };
            let mut sigma = Vec::with_capacity(grid.len());
            let mut anti = Vec::with_capacity(grid.len());
            for &w in grid {
                let (lo_p, hi_p) = floor_at(w);
                let (lo_m, hi_m) = floor_at(-w);
                sigma.push(0.5 * (lo_p + lo_m));
                anti.push(0.5 * (hi_p + hi_m));
            }
            out.push("value", sigma);
            out.push("value_antisqueezed", anti);
        }
        PhaseMode::Fixed { phi_sum } => {
            let phi = phi_sum.unwrap_or_else(|| provider.phi_sum_at_zero());
            let values = grid
                .iter()
                .map(|&w| {
                    0.5 * (sideband_noise(provider, w, phi, phase.delay)
                        + sideband_noise(provider, -w, phi, phase.delay))
                })
                .collect();
            out.push("value", values);
        }
    }
    out
}

/// Two-term decomposition of the fixed-angle spectrum at one sideband.
#[derive(Debug, Clone, Copy)]
pub struct FixedAngleDecomposition {
    pub sigma: f64,
    pub squeezed_part: f64,
    pub excess_part: f64,
}

/// `Sigma = e^{-2r} + 2 sinh(2r) sin^2(theta - theta0)`: the noise at a
/// fixed angle `theta0` decomposes into the floor plus an excess term driven
/// by the squeeze-angle drift. Serves as an independent oracle for
/// [`squeezing_spectrum`] in fixed mode.
pub fn fixed_angle_identity(r: f64, theta: f64, theta0: f64) -> FixedAngleDecomposition {
    let squeezed_part = (-2.0 * r).exp();
    let excess_part = 2.0 * (2.0 * r).sinh() * (theta - theta0).sin().powi(2);
    FixedAngleDecomposition {
        sigma: squeezed_part + excess_part,
        squeezed_part,
        excess_part,
    }
}

/// Result of the shot-noise crossing search on a fixed-angle spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SqueezingBandwidth {
    /// Bisection root of `Sigma(Omega) - 1`, rad/s.
    pub numeric: f64,
    /// `Omega_gvs sqrt(pi^2 - g^2)` for the linearized counter geometry.
    pub closed_form: Option<f64>,
}

/// Frequency at which the fixed-angle noise first passes from below to
/// above the shot-noise level.
pub fn squeezing_bandwidth(
    provider: &CoeffProvider,
    phase: &PhaseChoice,
) -> Result<SqueezingBandwidth> {
    let phi = match phase.mode {
        PhaseMode::Fixed { phi_sum } => phi_sum.unwrap_or_else(|| provider.phi_sum_at_zero()),
        PhaseMode::Optimal => {
            // The optimal spectrum never exceeds the shot noise.
            return Err(Error::NoCrossing);
        }
    };
    let sigma = |w: f64| {
        0.5 * (sideband_noise(provider, w, phi, phase.delay)
            + sideband_noise(provider, -w, phi, phase.delay))
            - 1.0
    };
    let scale = provider.frequency_scale();
    let span = match provider.geometry() {
        Geometry::Counter => 6.0,
        Geometry::Co => 3.0,
    };
    let n = 2048;
    let mut crossing = None;
    for i in 0..n {
        let a = span * scale * i as f64 / n as f64;
        let b = span * scale * (i + 1) as f64 / n as f64;
        if i == 0 {
            if sigma(a) >= 0.0 {
                return Err(Error::NoCrossing);
            }
        }
        if sigma(a) < 0.0 && sigma(b) >= 0.0 {
            crossing = Some(find_root(&sigma, (a, b))?);
            break;
        }
    }
    let numeric = crossing.ok_or(Error::NoCrossing)?;
    let closed_form = match (provider.geometry(), provider.mismatch().mode()) {
        (Geometry::Counter, MismatchMode::Linearized) => {
            let g = provider.gain();
            Some(provider.timescales().omega_gvs * (std::f64::consts::PI.powi(2) - g * g).sqrt())
        }
        _ => None,
    };
    Ok(SqueezingBandwidth {
        numeric,
        closed_form,
    })
}

//! Intensity-difference noise: the spectrum `V_-(Omega)`, shot noise,
//! photon-number-difference variance versus detection time, analytic
//! spontaneous and near-threshold limits, and the second-order field
//! correlations behind them.

use num_complex::Complex64;

use crate::dispersion::Geometry;
use crate::gain::CoeffProvider;
use crate::numerics::{fourier_series, integrate, sinc, Tolerance};
use crate::spectra::SpectrumSeries;
use crate::{Error, Result, GAIN_THRESHOLD};

/// Relative tolerance of every quadrature in this module.
const QUAD_REL_TOL: f64 = 1e-6;
/// Convolution reach beyond each integrand peak, in units of the frequency
/// scale.
const CONVOLUTION_REACH: f64 = 30.0;

/// Quadrature seeds for the sharp `|phi|^2` structure close to threshold:
/// the Lorentzian poles sit at `+- g sin(eps) Omega_gvs` around each peak.
fn pole_seeds(provider: &CoeffProvider, centers: &[f64], seeds: &mut Vec<f64>) {
    let g = provider.gain();
    if provider.geometry() == Geometry::Counter {
        let eps = GAIN_THRESHOLD - g;
        if eps < 0.3 {
            let w = g * eps.sin() * provider.timescales().omega_gvs;
            for &c in centers {
                seeds.push(c - w);
                seeds.push(c + w);
            }
        }
    }
    seeds.extend_from_slice(centers);
}

/// Mean photon flux of one beam, `<I_s> = int dOmega/2pi |V_s(Omega)|^2`.
pub fn mean_intensity(provider: &CoeffProvider) -> Result<f64> {
    let scale = provider.frequency_scale();
    let cut = CONVOLUTION_REACH * scale;
    let mut seeds = Vec::new();
    pole_seeds(provider, &[0.0], &mut seeds);
    let r = integrate(
        |w| provider.coeffs(w).v_s.norm_sqr(),
        -cut,
        cut,
        Tolerance::rel(QUAD_REL_TOL),
        &seeds,
    )?;
    Ok(r.value / (2.0 * std::f64::consts::PI))
}

/// Shot-noise level of the intensity difference, `<I_s> + <I_i>`.
pub fn shot_noise(provider: &CoeffProvider) -> Result<f64> {
    Ok(2.0 * mean_intensity(provider)?)
}

/// `V_-(Omega)`: one adaptive quadrature of
/// `|U_s(O') V_i*(-O-O') - U_s(O+O') V_i*(-O')|^2 / 2pi`
/// over a domain wide enough to cover both integrand peaks (at `O' ~ 0` and
/// `O' ~ -Omega`).
pub fn vminus_at(provider: &CoeffProvider, omega: f64) -> Result<f64> {
    let scale = provider.frequency_scale();
    let reach = CONVOLUTION_REACH * scale;
    let lo = (-reach).min(-omega - reach);
    let hi = reach.max(-omega + reach);
    let mut seeds = Vec::new();
    pole_seeds(provider, &[0.0, -omega], &mut seeds);
    let f = |wp: f64| {
        let c1 = provider.coeffs(wp);
        let c2 = provider.coeffs(omega + wp);
        (c1.u_s * c2.v_i.conj() - c2.u_s * c1.v_i.conj()).norm_sqr()
    };
    let r = integrate(f, lo, hi, Tolerance::rel(QUAD_REL_TOL), &seeds)?;
    Ok(r.value / (2.0 * std::f64::consts::PI))
}

/// Intensity-difference noise spectrum on a grid, raw and shot-noise
/// normalized.
pub fn vminus_spectrum(grid: &[f64], provider: &CoeffProvider) -> Result<SpectrumSeries> {
    let sn = shot_noise(provider)?;
    let mut raw = Vec::with_capacity(grid.len());
    for &w in grid {
        raw.push(vminus_at(provider, w)?);
    }
    let normalized: Vec<f64> = raw.iter().map(|v| v / sn).collect();
    let mut out = SpectrumSeries {
        omega: grid.to_vec(),
        omega_normalized: grid.iter().map(|w| w / provider.frequency_scale()).collect(),
        series: Vec::new(),
    };
    out.push("vminus", raw);
    out.push("vminus_over_sn", normalized);
    Ok(out)
}

/// Spontaneous-regime limit of `V_-/SN`: `1 - sinc(Omega/Omega_gvs)`.
pub fn vminus_spontaneous(x: f64) -> f64 {
    1.0 - sinc(x)
}

/// Near-threshold closed form of `V_-/SN` (equal to the fixed-angle
/// squeezing spectrum of the linearized counter geometry with the
/// propagation phase dropped):
/// `(gamma - g sin gamma) / (gamma + g sin gamma)`, `gamma = sqrt(g^2 + x^2)`.
pub fn vminus_near_threshold(x: f64, g: f64) -> f64 {
    let gamma = g.hypot(x);
    (gamma - g * gamma.sin()) / (gamma + g * gamma.sin())
}

/// Pole approximation of `|phi(Omega)|^2` close to threshold:
/// `(g^2 + x^2) / (g^2 sin^2(eps) + x^2)` with `eps = pi/2 - g`.
pub fn lorentzian_phi_sq(x: f64, g: f64) -> f64 {
    let eps = GAIN_THRESHOLD - g;
    (g * g + x * x) / (g * g * eps.sin().powi(2) + x * x)
}

/// Noise in the photon-number difference over a detection window `t_d`,
/// normalized to the shot noise `(<I_s> + <I_i>) t_d`.
pub fn photon_number_variance(t_d: f64, provider: &CoeffProvider) -> Result<f64> {
    let sn = shot_noise(provider)?;
    photon_number_variance_with_sn(t_d, provider, sn)
}

/// As [`photon_number_variance`] with a precomputed shot-noise level, for
/// sweeps over `t_d`.
pub fn photon_number_variance_with_sn(
    t_d: f64,
    provider: &CoeffProvider,
    sn: f64,
) -> Result<f64> {
    assert!(t_d > 0.0, "detection time must be positive");
    let scale = provider.frequency_scale();
    let cut = (CONVOLUTION_REACH * scale).max(20.0 / t_d);
    // V_- tends to the flat shot-noise level at large |Omega|; that part of
    // the sinc^2-windowed integral is carried in closed form, and only the
    // decaying remainder V_- (Omega) - SN is integrated numerically.
    // Otherwise the fat 1/Omega^2 tail of the window would need an
    // impractically large cutoff.
    let mut seeds = Vec::new();
    pole_seeds(provider, &[0.0], &mut seeds);
    let lobe = 2.0 * std::f64::consts::PI / t_d;
    let mut k = 1.0;
    while k * lobe < cut && k <= 64.0 {
        seeds.push(k * lobe);
        seeds.push(-k * lobe);
        k += 1.0;
    }
    let inner_failure = std::cell::RefCell::new(None);
    let f = |w: f64| {
        let window = sinc(t_d * w / 2.0).powi(2);
        let v = match vminus_at(provider, w) {
            Ok(v) => v,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                sn
            }
        };
        window * (v - sn)
    };
    // Absolute floor set so the variance ratio is resolved to ~1e-6.
    let r = integrate(
        f,
        -cut,
        cut,
        Tolerance::with_abs(QUAD_REL_TOL, 1e-6 * sn * 2.0 * std::f64::consts::PI / t_d),
        &seeds,
    )?;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    Ok(1.0 + t_d * r.value / (2.0 * std::f64::consts::PI) / sn)
}

/// Spontaneous-regime piecewise law for the normalized photon-number
/// difference variance.
pub fn variance_spontaneous(t_d: f64, tau_gvs: f64) -> f64 {
    if t_d <= tau_gvs {
        1.0 - t_d / (2.0 * tau_gvs)
    } else {
        tau_gvs / (2.0 * t_d)
    }
}

/// Second-order field correlations on a symmetric delay grid.
#[derive(Debug, Clone)]
pub struct FieldCorrelations {
    pub tau: Vec<f64>,
    /// `<A_s^dag(t) A_s(t + tau)>`... the self-coherence; equals the mean
    /// intensity at `tau = 0`.
    pub self_corr: Vec<Complex64>,
    /// `<A_s(t) A_i(t + tau)>`, the pair amplitude.
    pub cross_corr: Vec<Complex64>,
}

/// Fourier transforms of `|V_s|^2` and `U_s V_i` over the emission band.
///
/// The pair amplitude's spectrum only decays like `1/Omega`, which a
/// truncated transform turns into slow ringing at the correlation edge; its
/// asymptotic kernel `g sinc(Omega/Omega_gvs)` is therefore transformed in
/// closed form (a boxcar) and only the `O(1/Omega^2)` remainder goes through
/// quadrature. Co-geometry spectra decay fast enough for the direct route.
pub fn field_correlations(tau_grid: &[f64], provider: &CoeffProvider) -> Result<FieldCorrelations> {
    let n = tau_grid.len();
    for i in 0..n {
        let mirror = tau_grid[n - 1 - i];
        if (tau_grid[i] + mirror).abs() > 1e-9 * tau_grid[n - 1].abs().max(1e-300) {
            return Err(Error::InvalidConfig(
                "field_correlations requires a tau grid symmetric about 0".into(),
            ));
        }
    }
    let scale = provider.frequency_scale();
    let tol = Tolerance::with_abs(QUAD_REL_TOL, 0.0);
    let mut seeds = Vec::new();
    pole_seeds(provider, &[0.0], &mut seeds);

    let self_cut = match provider.geometry() {
        Geometry::Counter => 100.0 * scale,
        Geometry::Co => 30.0 * scale,
    };
    let self_corr = fourier_series(
        |w| Complex64::new(provider.coeffs(w).v_s.norm_sqr(), 0.0),
        -self_cut,
        self_cut,
        tau_grid,
        tol,
        &seeds,
    )?;

    // cross(tau) = (1/2pi) int e^{-i Omega tau} U_s(Omega) V_i(-Omega).
    let minus_tau: Vec<f64> = tau_grid.iter().map(|t| -t).collect();
    let cross_corr = match provider.geometry() {
        Geometry::Counter => {
            let g = provider.gain();
            let om_gvs = provider.timescales().omega_gvs;
            let c0 = provider.coeffs(0.0);
            let phase0 = Complex64::from_polar(1.0, (c0.u_s * c0.v_i).arg());
            let kernel = move |w: f64| phase0 * (g * sinc(w / om_gvs));
            let cut = 150.0 * scale;
            let residual = fourier_series(
                |w| {
                    let c = provider.coeffs(w);
                    c.u_s * c.v_i - kernel(w)
                },
                -cut,
                cut,
                &minus_tau,
                tol,
                &seeds,
            )?;
            // Boxcar transform of the kernel: (g/2 tau_gvs) Rect(tau/2 tau_gvs).
            let tau_gvs = provider.timescales().tau_gvs;
            tau_grid
                .iter()
                .zip(residual)
                .map(|(&t, res)| {
                    let rect = if t.abs() < tau_gvs { 1.0 } else { 0.0 };
                    phase0 * (g / (2.0 * tau_gvs) * rect) + res
                })
                .collect()
        }
        Geometry::Co => fourier_series(
            |w| {
                let c = provider.coeffs(w);
                c.u_s * c.v_i
            },
            -30.0 * scale,
            30.0 * scale,
            &minus_tau,
            tol,
            &seeds,
        )?,
    };

    Ok(FieldCorrelations {
        tau: tau_grid.to_vec(),
        self_corr,
        cross_corr,
    })
}

/// Correlation of the intensity difference, `<delta I_-(t) delta I_-(t+tau)>`.
///
/// The singular part `2 <I> delta(tau)` is carried as an exact scalar
/// weight; the smooth part is
/// `2 |self(tau)|^2 - |cross(tau)|^2 - |cross(-tau)|^2`.
#[derive(Debug, Clone)]
pub struct IntensityDifferenceCorrelation {
    pub tau: Vec<f64>,
    pub smooth: Vec<f64>,
    /// Weight of the `delta(tau)` shot-noise term: `<I_s> + <I_i>`.
    pub delta_weight: f64,
}

pub fn intensity_correlation_difference(
    tau_grid: &[f64],
    provider: &CoeffProvider,
) -> Result<IntensityDifferenceCorrelation> {
    let fc = field_correlations(tau_grid, provider)?;
    let n = tau_grid.len();
    let smooth = (0..n)
        .map(|i| {
            let self_sq = fc.self_corr[i].norm_sqr();
            let cross_sq = fc.cross_corr[i].norm_sqr();
            let cross_sq_mirror = fc.cross_corr[n - 1 - i].norm_sqr();
            2.0 * self_sq - cross_sq - cross_sq_mirror
        })
        .collect();
    Ok(IntensityDifferenceCorrelation {
        tau: tau_grid.to_vec(),
        smooth,
        delta_weight: shot_noise(provider)?,
    })
}

/// Which analytic limit reproduces the computed `V_-/SN` curve within 5%
/// over the sub-shot band `|Omega| <= 2.5` scale units.
#[derive(Debug, Clone, Copy, Default)]
pub struct RegimeTags {
    pub spontaneous_ok: bool,
    pub near_threshold_ok: bool,
}

/// Full noise report: spectrum, shot noise, variance curve, regime tags.
#[derive(Debug, Clone)]
pub struct NoiseReport {
    pub vminus: SpectrumSeries,
    /// Photons per second; `V_-/SN` uses this level.
    pub shot_noise: f64,
    /// `(t_d, variance ratio)` pairs.
    pub variance_curve: Vec<(f64, f64)>,
    pub regime_tags: RegimeTags,
}

/// Default detection-time grid: logarithmic, `0.05..=50 tau_gvs`, 40 points.
pub fn default_detection_times(tau_gvs: f64) -> Vec<f64> {
    let (lo, hi, n) = (0.05 * tau_gvs, 50.0 * tau_gvs, 40);
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

pub fn noise_report(
    grid: &[f64],
    t_d_grid: &[f64],
    provider: &CoeffProvider,
) -> Result<NoiseReport> {
    let sn = shot_noise(provider)?;
    let vminus = vminus_spectrum(grid, provider)?;
    let mut variance_curve = Vec::with_capacity(t_d_grid.len());
    for &t_d in t_d_grid {
        variance_curve.push((t_d, photon_number_variance_with_sn(t_d, provider, sn)?));
    }
    let scale = provider.frequency_scale();
    let g = provider.gain();
    let ratio = vminus.get("vminus_over_sn").expect("series present");
    let mut tags = RegimeTags::default();
    let band: Vec<(f64, f64)> = vminus
        .omega
        .iter()
        .zip(ratio)
        .filter(|(w, _)| w.abs() <= 2.5 * scale)
        .map(|(w, v)| (*w, *v))
        .collect();
    if !band.is_empty() {
        tags.spontaneous_ok = band
            .iter()
            .all(|(w, v)| (v - vminus_spontaneous(w / scale)).abs() <= 0.05);
        tags.near_threshold_ok = band
            .iter()
            .all(|(w, v)| (v - vminus_near_threshold(w / scale, g)).abs() <= 0.05);
    }
    Ok(NoiseReport {
        vminus,
        shot_noise: sn,
        variance_curve,
        regime_tags: tags,
    })
}

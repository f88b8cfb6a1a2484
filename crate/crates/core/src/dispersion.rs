//! Wavenumbers, group derivatives, quasi-phase matching, characteristic
//! timescales, and the phase-mismatch functions for both geometries.

use serde::{Deserialize, Serialize};

use crate::material::MaterialDispersion;
use crate::{Error, Result, GAIN_THRESHOLD, SPEED_OF_LIGHT};

/// Propagation geometry of the down-converted pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Signal co-propagates with the pump, idler back-propagates.
    Counter,
    /// Single-pass, signal and idler co-propagate with the pump.
    Co,
}

/// How the mismatch functions evaluate away from the reference frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchMode {
    /// Full Sellmeier evaluation of `k_j(+-Omega)`.
    Exact,
    /// Taylor form in the characteristic timescales.
    Linearized,
}

/// One parametric interaction: wavelengths, grating, slab, gain, geometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InteractionConfig {
    pub lambda_p: f64,
    pub lambda_s: f64,
    pub lambda_i: f64,
    /// Poling period in metres; `None` until solved or supplied.
    pub poling_period: Option<f64>,
    /// QPM order, odd positive.
    pub poling_order: u32,
    pub crystal_length: f64,
    /// Dimensionless gain; the counter geometry oscillates at `pi/2`.
    pub gain: f64,
    pub pump_phase: f64,
    pub geometry: Geometry,
}

impl InteractionConfig {
    /// Builds a config with the idler wavelength fixed by energy conservation.
    pub fn new(
        lambda_p: f64,
        lambda_s: f64,
        crystal_length: f64,
        gain: f64,
        geometry: Geometry,
    ) -> Result<Self> {
        if lambda_s <= lambda_p {
            return Err(Error::InvalidConfig(
                "signal wavelength must exceed the pump wavelength".into(),
            ));
        }
        let lambda_i = 1.0 / (1.0 / lambda_p - 1.0 / lambda_s);
        let cfg = InteractionConfig {
            lambda_p,
            lambda_s,
            lambda_i,
            poling_period: None,
            poling_order: 1,
            crystal_length,
            gain,
            pump_phase: 0.0,
            geometry,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_p", self.lambda_p),
            ("lambda_s", self.lambda_s),
            ("lambda_i", self.lambda_i),
            ("crystal_length", self.crystal_length),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        let balance = 1.0 / self.lambda_s + 1.0 / self.lambda_i;
        if ((balance - 1.0 / self.lambda_p) / (1.0 / self.lambda_p)).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "energy conservation 1/lambda_p = 1/lambda_s + 1/lambda_i violated".into(),
            ));
        }
        if self.poling_order == 0 || self.poling_order % 2 == 0 {
            return Err(Error::InvalidConfig(
                "poling order must be an odd positive integer".into(),
            ));
        }
        if self.gain < 0.0 {
            return Err(Error::InvalidConfig("gain must be non-negative".into()));
        }
        if self.geometry == Geometry::Counter && self.gain >= GAIN_THRESHOLD {
            return Err(Error::AboveThreshold { gain: self.gain });
        }
        Ok(())
    }

    pub fn omega_p(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.lambda_p
    }
    pub fn omega_s(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.lambda_s
    }
    pub fn omega_i(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.lambda_i
    }

    /// True within `1e-3` of the counter-propagating threshold, where the
    /// undepleted-pump results amplify any quadrature error.
    pub fn near_threshold(&self) -> bool {
        self.geometry == Geometry::Counter && GAIN_THRESHOLD - self.gain < 1e-3
    }

    /// Solves the QPM condition and stores the resulting poling period.
    pub fn solve_poling_period(&mut self, material: &MaterialDispersion) -> Result<f64> {
        let period = qpm_poling_period(self, material)?;
        self.poling_period = Some(period);
        Ok(period)
    }
}

/// Wavenumber `k = n(omega) * omega / c` at absolute frequency `omega`.
pub fn wavenumber(material: &MaterialDispersion, omega: f64) -> Result<f64> {
    let lambda = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega;
    Ok(material.index(lambda)? * omega / SPEED_OF_LIGHT)
}

fn wavenumber_unchecked(material: &MaterialDispersion, omega: f64) -> f64 {
    let lambda = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega;
    material.index_unchecked(lambda) * omega / SPEED_OF_LIGHT
}

/// First and second frequency derivatives of the wavenumber, with the
/// relative disagreement of the two Richardson levels as error estimate.
#[derive(Debug, Clone, Copy)]
pub struct GroupDerivatives {
    /// dk/domega, s/m (inverse group velocity).
    pub k1: f64,
    /// d2k/domega2, s^2/m.
    pub k2: f64,
    pub rel_error: f64,
}

/// Relative finite-difference step for dk/domega.
const K1_REL_STEP: f64 = 1e-6;
/// Relative step for d2k/domega2. The second difference signal at 1e-6 is
/// only ~1e2 times the f64 evaluation noise, so k2 uses a larger step.
const K2_REL_STEP: f64 = 5e-5;
/// Richardson levels must agree to this relative tolerance.
const DERIV_STABILITY_LIMIT: f64 = 1e-4;

/// Central finite differences with one Richardson halving.
pub fn group_derivatives(material: &MaterialDispersion, omega: f64) -> Result<GroupDerivatives> {
    let h_max = omega * K2_REL_STEP;
    // Interior margin of five steps on each side.
    let lambda_at = |om: f64| 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / om;
    material.check_range(lambda_at(omega + 5.0 * h_max))?;
    material.check_range(lambda_at(omega - 5.0 * h_max))?;

    let k = |om: f64| wavenumber_unchecked(material, om);
    let k0 = k(omega);

    let h1 = omega * K1_REL_STEP;
    let d1 = |h: f64| (k(omega + h) - k(omega - h)) / (2.0 * h);
    let (c1a, c1b) = (d1(h1), d1(0.5 * h1));
    let k1 = (4.0 * c1b - c1a) / 3.0;
    let scale1 = k1.abs().max(k0 / omega * 1e-6);
    let rel1 = (k1 - c1b).abs() / scale1;

    let h2 = omega * K2_REL_STEP;
    let d2 = |h: f64| (k(omega + h) - 2.0 * k0 + k(omega - h)) / (h * h);
    let (c2a, c2b) = (d2(h2), d2(0.5 * h2));
    let k2 = (4.0 * c2b - c2a) / 3.0;
    // Instability scale floored at the roundoff level of the second difference.
    let noise_floor = 8.0 * f64::EPSILON * k0 / (h2 * h2);
    let scale2 = k2.abs().max(noise_floor / DERIV_STABILITY_LIMIT);
    let rel2 = (k2 - c2b).abs() / scale2;

    let rel_error = rel1.max(rel2);
    if rel_error > DERIV_STABILITY_LIMIT {
        return Err(Error::NumericalInstability {
            relative: rel_error,
            limit: DERIV_STABILITY_LIMIT,
        });
    }
    Ok(GroupDerivatives { k1, k2, rel_error })
}

/// The three characteristic timescales of the slab and their inverse
/// bandwidths.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Timescales {
    /// `(l_c/2)(k1_s + k1_i)`: sum of half transit times. Sets the width of
    /// the counter-propagating emission.
    pub tau_gvs: f64,
    /// `(l_c/2)(k1_s - k1_i)`: group-velocity mismatch; zero at degeneracy
    /// with equal polarizations.
    pub tau_gvm: f64,
    /// `sqrt((l_c/4)(k2_s + k2_i))`: group-velocity dispersion time. Sets the
    /// width of the co-propagating emission.
    pub tau_gvd: f64,
    pub omega_gvs: f64,
    /// Infinite (`f64::INFINITY`) when `tau_gvm = 0`.
    pub omega_gvm: f64,
    pub omega_gvd: f64,
}

/// Timescales from the group derivatives at the signal and idler frequencies.
pub fn timescales(config: &InteractionConfig, material: &MaterialDispersion) -> Result<Timescales> {
    let ds = group_derivatives(material, config.omega_s())?;
    let di = group_derivatives(material, config.omega_i())?;
    let half = config.crystal_length / 2.0;
    let tau_gvs = half * (ds.k1 + di.k1);
    let tau_gvm = half * (ds.k1 - di.k1);
    let tau_gvd = (half / 2.0 * (ds.k2 + di.k2)).max(0.0).sqrt();
    Ok(Timescales {
        tau_gvs,
        tau_gvm,
        tau_gvd,
        omega_gvs: 1.0 / tau_gvs,
        omega_gvm: 1.0 / tau_gvm.abs(),
        omega_gvd: 1.0 / tau_gvd,
    })
}

/// Grating vector needed to close the phase-matching condition at the
/// reference frequencies.
fn required_grating_vector(
    config: &InteractionConfig,
    material: &MaterialDispersion,
) -> Result<f64> {
    let k_p = wavenumber(material, config.omega_p())?;
    let k_s = wavenumber(material, config.omega_s())?;
    let k_i = wavenumber(material, config.omega_i())?;
    Ok(match config.geometry {
        // k_s - k_i - k_p + k_G = 0 (idler back-propagates)
        Geometry::Counter => k_p + k_i - k_s,
        // k_s + k_i - k_p + k_G = 0
        Geometry::Co => k_p - k_s - k_i,
    })
}

/// Poling period solving the QPM condition of the configured geometry at
/// order `m`; the residual mismatch of the returned period is below
/// 1 rad/m by construction.
pub fn qpm_poling_period(
    config: &InteractionConfig,
    material: &MaterialDispersion,
) -> Result<f64> {
    let k_g = required_grating_vector(config, material)?;
    if k_g <= 0.0 {
        return Err(Error::NoSolution { k_g });
    }
    Ok(2.0 * std::f64::consts::PI * config.poling_order as f64 / k_g)
}

/// Phase-mismatch functions of one configured interaction.
///
/// For the counter geometry this exposes `D(Omega) l_c / 2` (mismatch of the
/// frequency-conjugate pair) and the global propagation phase `beta(Omega)`;
/// for the co geometry, `Delta(Omega) l_c / 2`. Reference wavenumbers and the
/// solved grating vector are captured at construction.
#[derive(Debug, Clone)]
pub struct Mismatch {
    geometry: Geometry,
    mode: MismatchMode,
    material: MaterialDispersion,
    omega_s: f64,
    omega_i: f64,
    half_lc: f64,
    /// k_s, k_i, k_p at the reference frequencies.
    pub k_s: f64,
    pub k_i: f64,
    pub k_p: f64,
    /// Grating vector `2 pi m / Lambda` from the configured poling period.
    pub k_g: f64,
    pub scales: Timescales,
}

impl Mismatch {
    pub fn new(
        config: &InteractionConfig,
        material: &MaterialDispersion,
        mode: MismatchMode,
    ) -> Result<Self> {
        config.validate()?;
        let period = config.poling_period.ok_or_else(|| {
            Error::InvalidConfig("poling period not set; solve or supply it first".into())
        })?;
        if period <= 0.0 {
            return Err(Error::InvalidConfig("poling period must be positive".into()));
        }
        let k_s = wavenumber(material, config.omega_s())?;
        let k_i = wavenumber(material, config.omega_i())?;
        let k_p = wavenumber(material, config.omega_p())?;
        let k_g = 2.0 * std::f64::consts::PI * config.poling_order as f64 / period;
        let scales = timescales(config, material)?;
        Ok(Mismatch {
            geometry: config.geometry,
            mode,
            material: material.clone(),
            omega_s: config.omega_s(),
            omega_i: config.omega_i(),
            half_lc: config.crystal_length / 2.0,
            k_s,
            k_i,
            k_p,
            k_g,
            scales,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn mode(&self) -> MismatchMode {
        self.mode
    }

    /// Residual `D(0)` (counter) or `Delta(0)` (co) in rad/m. Reported, not
    /// an error: a deliberately detuned grating is representable.
    pub fn residual_at_zero(&self) -> f64 {
        match self.geometry {
            Geometry::Counter => self.k_s - self.k_i - self.k_p + self.k_g,
            Geometry::Co => self.k_s + self.k_i - self.k_p + self.k_g,
        }
    }

    fn k_signal(&self, offset: f64) -> f64 {
        wavenumber_unchecked(&self.material, self.omega_s + offset)
    }

    fn k_idler(&self, offset: f64) -> f64 {
        wavenumber_unchecked(&self.material, self.omega_i + offset)
    }

    /// `D(Omega) l_c / 2` for the counter geometry.
    pub fn d_half(&self, omega: f64) -> f64 {
        debug_assert_eq!(self.geometry, Geometry::Counter);
        match self.mode {
            MismatchMode::Exact => {
                (self.k_signal(omega) - self.k_idler(-omega) - self.k_p + self.k_g) * self.half_lc
            }
            MismatchMode::Linearized => self.scales.tau_gvs * omega,
        }
    }

    /// Global propagation phase `beta(Omega)`.
    pub fn beta(&self, omega: f64) -> f64 {
        match self.mode {
            MismatchMode::Exact => {
                (self.k_signal(omega) + self.k_idler(-omega) - self.k_s - self.k_i) * self.half_lc
            }
            MismatchMode::Linearized => {
                self.scales.tau_gvm * omega + self.scales.tau_gvd.powi(2) * omega * omega
            }
        }
    }

    /// `Delta(Omega) l_c / 2` for the co geometry.
    pub fn delta_half(&self, omega: f64) -> f64 {
        debug_assert_eq!(self.geometry, Geometry::Co);
        match self.mode {
            MismatchMode::Exact => {
                (self.k_signal(omega) + self.k_idler(-omega) - self.k_p + self.k_g) * self.half_lc
            }
            MismatchMode::Linearized => {
                self.scales.tau_gvm * omega + self.scales.tau_gvd.powi(2) * omega * omega
            }
        }
    }

    /// `[k_s(Omega) - k_i(-Omega)] l_c / 2`: a phase common to the signal
    /// coefficients that cancels in every implemented observable.
    pub fn chi(&self, omega: f64) -> f64 {
        match self.mode {
            MismatchMode::Exact => (self.k_signal(omega) - self.k_idler(-omega)) * self.half_lc,
            MismatchMode::Linearized => {
                (self.k_s - self.k_i) * self.half_lc + self.scales.tau_gvs * omega
            }
        }
    }

    /// Confirms the exact-mode index evaluations stay inside the material's
    /// declared wavelength range for `|Omega| <= omega_cap`.
    pub fn check_offset_range(&self, omega_cap: f64) -> Result<()> {
        if self.mode == MismatchMode::Linearized {
            return Ok(());
        }
        let c2pi = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT;
        for om in [
            self.omega_s + omega_cap,
            self.omega_s - omega_cap,
            self.omega_i + omega_cap,
            self.omega_i - omega_cap,
        ] {
            self.material.check_range(c2pi / om)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::IndexForm;
    use approx::assert_relative_eq;

    fn ppln_counter() -> (InteractionConfig, MaterialDispersion) {
        let cfg =
            InteractionConfig::new(771e-9, 1542e-9, 0.01, 1.0, Geometry::Counter).unwrap();
        let mat = MaterialDispersion::builtin("linbo3_congruent_o").unwrap();
        (cfg, mat)
    }

    fn ppln_co() -> (InteractionConfig, MaterialDispersion) {
        let cfg = InteractionConfig::new(771e-9, 1542e-9, 0.01, 1.0, Geometry::Co).unwrap();
        let mat = MaterialDispersion::builtin("linbo3_congruent_e").unwrap();
        (cfg, mat)
    }

    #[test]
    fn wavenumber_matches_sellmeier_by_hand() {
        let (cfg, mat) = ppln_counter();
        let k = wavenumber(&mat, cfg.omega_s()).unwrap();
        // 50-digit reference for the ordinary-ray dataset at 1542 nm.
        assert_relative_eq!(k, 9_011_165.64317, max_relative = 1e-10);
        assert!(k > 0.0);
    }

    #[test]
    fn constant_index_gives_linear_k() {
        let mat = MaterialDispersion::constant(2.0);
        let om = 1e15;
        let k1 = wavenumber(&mat, om).unwrap();
        let k2 = wavenumber(&mat, 2.0 * om).unwrap();
        assert_relative_eq!(k2, 2.0 * k1, max_relative = 1e-14);
        assert_relative_eq!(k1, 2.0 * om / SPEED_OF_LIGHT, max_relative = 1e-14);
    }

    #[test]
    fn wavenumber_out_of_range() {
        let (_, mat) = ppln_counter();
        let om_uv = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / 200e-9;
        assert!(matches!(
            wavenumber(&mat, om_uv),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn derivatives_of_constant_index() {
        let mat = MaterialDispersion::constant(1.7);
        let d = group_derivatives(&mat, 1.2e15).unwrap();
        assert_relative_eq!(d.k1, 1.7 / SPEED_OF_LIGHT, max_relative = 1e-10);
        assert!(d.k2.abs() < 1e-32, "k2 = {}", d.k2);
    }

    #[test]
    fn derivatives_of_cauchy_index_match_closed_form() {
        // n = a + b/L^2 is quadratic in omega: n = a + b' om^2 with
        // b' = b * (1e-6 / (2 pi c))^2, so k = (a om + b' om^3)/c,
        // k1 = (a + 3 b' om^2)/c, k2 = 6 b' om / c.
        let (a, b) = (1.5, 0.012);
        let mat = MaterialDispersion::new(
            "cauchy_test",
            IndexForm::Cauchy,
            vec![a, b, 0.0],
            (200e-9, 50e-6),
        )
        .unwrap();
        let om: f64 = 1.1e15;
        let bp = b * (1e-6 / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT)).powi(2);
        let d = group_derivatives(&mat, om).unwrap();
        assert_relative_eq!(d.k1, (a + 3.0 * bp * om * om) / SPEED_OF_LIGHT, max_relative = 1e-9);
        assert_relative_eq!(d.k2, 6.0 * bp * om / SPEED_OF_LIGHT, max_relative = 1e-6);
    }

    #[test]
    fn finite_difference_oracle_for_k1() {
        // Independent two-step central difference over `wavenumber` sampling.
        let (cfg, mat) = ppln_counter();
        let om = cfg.omega_s();
        let h = om * 1e-7;
        let oracle =
            (wavenumber(&mat, om + h).unwrap() - wavenumber(&mat, om - h).unwrap()) / (2.0 * h);
        let d = group_derivatives(&mat, om).unwrap();
        assert_relative_eq!(d.k1, oracle, max_relative = 1e-5);
    }

    #[test]
    fn ppln_reference_derivatives() {
        // 50-digit reference values for the bundled datasets at 1542 nm.
        let (cfg, mat) = ppln_counter();
        let d = group_derivatives(&mat, cfg.omega_s()).unwrap();
        assert_relative_eq!(d.k1, 7.55190880779e-9, max_relative = 1e-8);
        assert_relative_eq!(d.k2, 1.1289634501e-25, max_relative = 1e-5);
        let (cfg_e, mat_e) = ppln_co();
        let de = group_derivatives(&mat_e, cfg_e.omega_s()).unwrap();
        assert_relative_eq!(de.k1, 7.28035889023e-9, max_relative = 1e-8);
        assert_relative_eq!(de.k2, 1.02471121187e-25, max_relative = 1e-5);
    }

    #[test]
    fn ppln_timescales() {
        let (cfg, mat) = ppln_counter();
        let ts = timescales(&cfg, &mat).unwrap();
        assert_relative_eq!(ts.tau_gvs, 75.51908808e-12, max_relative = 1e-7);
        assert_relative_eq!(ts.omega_gvs, 1.324168532e10, max_relative = 1e-7);
        // Degenerate equal-polarization interaction: exactly zero.
        assert_eq!(ts.tau_gvm, 0.0);
        assert_relative_eq!(ts.tau_gvd, 23.758824e-15, max_relative = 1e-5);
        // The extraordinary dataset reproduces the dispersion bandwidth
        // Omega_gvd = 4.45e13 rad/s of the reference slab within 2%.
        let (cfg_e, mat_e) = ppln_co();
        let tse = timescales(&cfg_e, &mat_e).unwrap();
        assert_relative_eq!(tse.omega_gvd, 4.4178834e13, max_relative = 1e-5);
        assert!((tse.omega_gvd - 4.45e13).abs() / 4.45e13 < 0.02);
    }

    #[test]
    fn timescales_scale_with_crystal_length() {
        let (mut cfg, mat) = ppln_counter();
        let full = timescales(&cfg, &mat).unwrap();
        cfg.crystal_length /= 2.0;
        let half = timescales(&cfg, &mat).unwrap();
        assert_relative_eq!(half.tau_gvs, full.tau_gvs / 2.0, max_relative = 1e-12);
        assert_relative_eq!(
            half.tau_gvd,
            full.tau_gvd / 2.0f64.sqrt(),
            max_relative = 1e-12
        );
        assert!(full.tau_gvs >= full.tau_gvm.abs());
    }

    #[test]
    fn qpm_counter_and_co_periods() {
        let (cfg, mat) = ppln_counter();
        let period = qpm_poling_period(&cfg, &mat).unwrap();
        assert_relative_eq!(period, 341.27709e-9, max_relative = 1e-9);
        let (cfg_e, mat_e) = ppln_co();
        let period_co = qpm_poling_period(&cfg_e, &mat_e).unwrap();
        assert_relative_eq!(period_co, 18.757372e-6, max_relative = 1e-7);
    }

    #[test]
    fn qpm_dispersionless_closed_form() {
        // With constant n the counter condition reads
        // k_G = n (omega_p + omega_i - omega_s)/c.
        let n = 2.25;
        let mat = MaterialDispersion::constant(n);
        let cfg = InteractionConfig::new(800e-9, 1900e-9, 0.01, 0.5, Geometry::Counter).unwrap();
        let period = qpm_poling_period(&cfg, &mat).unwrap();
        let k_g = n * (cfg.omega_p() + cfg.omega_i() - cfg.omega_s()) / SPEED_OF_LIGHT;
        assert_relative_eq!(
            period,
            2.0 * std::f64::consts::PI / k_g,
            max_relative = 1e-13
        );
    }

    #[test]
    fn qpm_no_solution() {
        // A medium whose index falls with frequency has k_p < k_s + k_i, so
        // the co-propagating condition needs a negative grating vector.
        let mat = MaterialDispersion::new(
            "anomalous",
            IndexForm::Cauchy,
            vec![2.0, -0.05, 0.0],
            (400e-9, 3000e-9),
        )
        .unwrap();
        let cfg = InteractionConfig::new(800e-9, 1600e-9, 0.01, 0.5, Geometry::Co).unwrap();
        assert!(matches!(
            qpm_poling_period(&cfg, &mat),
            Err(Error::NoSolution { .. })
        ));
    }

    #[test]
    fn solved_period_nulls_the_mismatch() {
        for (mut cfg, mat) in [ppln_counter(), ppln_co()] {
            cfg.solve_poling_period(&mat).unwrap();
            let mm = Mismatch::new(&cfg, &mat, MismatchMode::Exact).unwrap();
            assert!(
                (mm.residual_at_zero() * cfg.crystal_length).abs() < 1e-6,
                "residual {}",
                mm.residual_at_zero()
            );
            let d0 = match cfg.geometry {
                Geometry::Counter => mm.d_half(0.0),
                Geometry::Co => mm.delta_half(0.0),
            };
            assert!(d0.abs() < 1e-6);
            assert_eq!(mm.beta(0.0), 0.0);
        }
    }

    #[test]
    fn linearized_d_is_unity_at_omega_gvs() {
        let (mut cfg, mat) = ppln_counter();
        cfg.solve_poling_period(&mat).unwrap();
        let mm = Mismatch::new(&cfg, &mat, MismatchMode::Linearized).unwrap();
        assert_relative_eq!(mm.d_half(mm.scales.omega_gvs), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn exact_and_linearized_mismatch_agree_within_band() {
        let (mut cfg, mat) = ppln_counter();
        cfg.solve_poling_period(&mat).unwrap();
        let exact = Mismatch::new(&cfg, &mat, MismatchMode::Exact).unwrap();
        let lin = Mismatch::new(&cfg, &mat, MismatchMode::Linearized).unwrap();
        let om_gvs = exact.scales.omega_gvs;
        for i in 1..=20 {
            let om = 10.0 * om_gvs * i as f64 / 20.0;
            let (de, dl) = (exact.d_half(om), lin.d_half(om));
            assert!(
                ((de - dl) / dl).abs() < 0.01,
                "at {i}/20 of 10 Omega_gvs: {de} vs {dl}"
            );
        }
    }

    #[test]
    fn beta_residual_is_higher_order() {
        // |beta_exact - beta_lin| / (tau_gvd^2 Omega^2) -> 0 as Omega -> 0.
        // Use a detuned (non-degenerate) pair so odd orders are present.
        let mat = MaterialDispersion::builtin("linbo3_congruent_o").unwrap();
        let mut cfg =
            InteractionConfig::new(771e-9, 1400e-9, 0.01, 0.5, Geometry::Counter).unwrap();
        cfg.solve_poling_period(&mat).unwrap();
        let exact = Mismatch::new(&cfg, &mat, MismatchMode::Exact).unwrap();
        let lin = Mismatch::new(&cfg, &mat, MismatchMode::Linearized).unwrap();
        let gvd2 = exact.scales.tau_gvd.powi(2);
        let ratio = |om: f64| (exact.beta(om) - lin.beta(om)).abs() / (gvd2 * om * om);
        let (r1, r2, r3) = (ratio(4e12), ratio(2e12), ratio(1e12));
        assert!(r2 < r1 && r3 < r2, "ratios {r1} {r2} {r3} not decreasing");
        // Residual is O(Omega^3), so the normalized ratio scales ~ Omega.
        assert!(r3 < 0.35 * r1);
    }

    #[test]
    fn config_contract_violations() {
        assert!(InteractionConfig::new(771e-9, 1542e-9, 0.01, 1.6, Geometry::Counter).is_err());
        assert!(InteractionConfig::new(771e-9, 1542e-9, 0.01, 1.6, Geometry::Co).is_ok());
        assert!(InteractionConfig::new(771e-9, 600e-9, 0.01, 0.5, Geometry::Counter).is_err());
        let mut bad = InteractionConfig::new(771e-9, 1542e-9, 0.01, 0.5, Geometry::Counter).unwrap();
        bad.poling_order = 2;
        assert!(bad.validate().is_err());
        bad.poling_order = 1;
        bad.lambda_i = 1500e-9;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn near_threshold_flag() {
        let cfg = InteractionConfig::new(
            771e-9,
            1542e-9,
            0.01,
            GAIN_THRESHOLD - 1e-4,
            Geometry::Counter,
        )
        .unwrap();
        assert!(cfg.near_threshold());
        let cfg2 = InteractionConfig::new(771e-9, 1542e-9, 0.01, 1.0, Geometry::Counter).unwrap();
        assert!(!cfg2.near_threshold());
    }
}

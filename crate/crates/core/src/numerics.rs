//! Shared numerical kernels: adaptive Gauss-Kronrod quadrature, Fourier
//! transforms of spectral densities, and bisection root finding.
//!
//! The integrator is deterministic: identical inputs produce bit-identical
//! results. Panels are refined worst-error-first with a stable tie-break on
//! insertion order.

use num_complex::Complex64;

use crate::{Error, Result};

/// `sin(x)/x` with the removable singularity filled in.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `cosh(sqrt(w))` continued through `w < 0` as `cos(sqrt(-w))`.
#[inline]
pub fn cosh_sqrt(w: f64) -> f64 {
    if w.abs() < 1e-8 {
        1.0 + w / 2.0 + w * w / 24.0
    } else if w > 0.0 {
        w.sqrt().cosh()
    } else {
        (-w).sqrt().cos()
    }
}

/// `sinh(sqrt(w))/sqrt(w)` continued through `w < 0` as `sin(sqrt(-w))/sqrt(-w)`.
#[inline]
pub fn sinhc_sqrt(w: f64) -> f64 {
    if w.abs() < 1e-8 {
        1.0 + w / 6.0 + w * w / 120.0
    } else if w > 0.0 {
        let s = w.sqrt();
        s.sinh() / s
    } else {
        let s = (-w).sqrt();
        s.sin() / s
    }
}

/// Convergence targets for [`integrate`]: the run stops once the summed
/// error estimate drops below `max(rel * |value|, abs)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance { rel, abs: 0.0 }
    }

    pub fn with_abs(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    fn threshold(&self, value: f64) -> f64 {
        (self.rel * value.abs()).max(self.abs)
    }
}

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Maximum number of panels before [`integrate`] gives up.
pub const PANEL_BUDGET: usize = 100_000;

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1] (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss-Kronrod 7/15 evaluation on [a, b]; returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Worst error first; ties broken by insertion order for determinism.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive quadrature of `f` on `[a, b]`.
///
/// `seeds` force initial panel boundaries (values outside `(a, b)` are
/// ignored); use them to mark narrow features the first sweep would miss.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    seeds: &[f64],
) -> Result<QuadratureResult> {
    assert!(a < b, "integrate: require a < b");

    let mut bounds: Vec<f64> = Vec::with_capacity(seeds.len() + 2);
    bounds.push(a);
    bounds.extend(seeds.iter().copied().filter(|s| *s > a && *s < b));
    bounds.push(b);
    bounds.sort_by(|x, y| x.partial_cmp(y).unwrap());
    bounds.dedup();

    let mut heap = std::collections::BinaryHeap::with_capacity(64);
    let mut seq: u64 = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in bounds.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            seq,
        });
        seq += 1;
    }

    while total_err > tol.threshold(total) {
        if heap.len() >= PANEL_BUDGET {
            return Err(Error::QuadratureFailure {
                error_estimate: total_err,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at f64 resolution.
            return Err(Error::QuadratureFailure {
                error_estimate: total_err,
                panels: heap.len() + 1,
            });
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            seq,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            seq: seq + 1,
        });
        seq += 2;
    }

    // Re-sum in deterministic (interval) order to shed accumulation drift.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate = panels.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        panels_used: panels.len(),
    })
}

/// `(1/2pi) \int dOmega e^{i Omega tau} f(Omega)` for every `tau` in `tau_grid`.
///
/// The integrand must decay inside `[a, b]`; real and imaginary parts are
/// integrated separately with the same tolerance and seeds.
pub fn fourier_series<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tau_grid: &[f64],
    tol: Tolerance,
    seeds: &[f64],
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let re = integrate(
            |w| {
                let z = f(w) * Complex64::from_polar(1.0, w * tau);
                z.re
            },
            a,
            b,
            tol,
            seeds,
        )?;
        let im = integrate(
            |w| {
                let z = f(w) * Complex64::from_polar(1.0, w * tau);
                z.im
            },
            a,
            b,
            tol,
            seeds,
        )?;
        out.push(Complex64::new(re.value, im.value) / (2.0 * std::f64::consts::PI));
    }
    Ok(out)
}

/// Bisection root of `f` on a sign-changing bracket.
///
/// Stops when the bracket shrinks below `1e-12` of its initial width or
/// after 80 iterations.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: (f64, f64)) -> Result<f64> {
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BadBracket { a, b });
    }
    let width0 = (b - a).abs();
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (b - a).abs() < 1e-12 * width0 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_sine_over_half_period() {
        let r = integrate(|x| x.sin(), 0.0, PI, Tolerance::rel(1e-12), &[]).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-10);
        assert!(r.error_estimate <= 1e-12 * 2.0 + 1e-15);
    }

    #[test]
    fn narrow_lorentzian_with_seeds() {
        let s = 1e-3;
        let r = integrate(
            |x| 1.0 / (s * s + x * x),
            -100.0 * s,
            100.0 * s,
            Tolerance::rel(1e-10),
            &[-s, 0.0, s],
        )
        .unwrap();
        let exact = 2.0 / s * (100.0f64).atan();
        assert_relative_eq!(r.value, exact, max_relative = 1e-8);
    }

    #[test]
    fn budget_exhausted_on_singularity() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, Tolerance::rel(1e-12), &[]);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn halving_tolerance_does_not_worsen_error() {
        let exact = 2.0 / 1e-3 * (100.0f64).atan();
        let run = |rel| {
            integrate(
                |x| 1.0 / (1e-6 + x * x),
                -0.1,
                0.1,
                Tolerance::rel(rel),
                &[0.0],
            )
            .unwrap()
            .value
        };
        let mut prev = f64::INFINITY;
        for rel in [1e-4, 5e-5, 2.5e-5, 1.25e-5, 1e-8] {
            let err = (run(rel) - exact).abs();
            assert!(err <= prev + 1e-13 * exact);
            prev = err;
        }
    }

    #[test]
    fn quadrature_is_deterministic() {
        let run = || {
            integrate(
                |x| (x * 10.0).cos() / (1.0 + x * x),
                -5.0,
                5.0,
                Tolerance::rel(1e-10),
                &[0.3],
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.panels_used, b.panels_used);
    }

    #[test]
    fn fourier_of_sinc_squared_is_triangle() {
        // (1/2pi) int e^{i w t} sinc^2(w) dw = Triangle(t/2)/2.
        let taus = [0.0, 0.5, 1.0, 1.5, 1.9, 2.5];
        let vals = fourier_series(
            |w| Complex64::new(sinc(w) * sinc(w), 0.0),
            -600.0,
            600.0,
            &taus,
            Tolerance::with_abs(1e-9, 1e-12),
            &[0.0],
        )
        .unwrap();
        for (&t, v) in taus.iter().zip(&vals) {
            let expect = 0.5 * (1.0 - (t / 2.0).abs()).max(0.0);
            assert!((v.re - expect).abs() < 2e-3, "tau={t}: {} vs {expect}", v.re);
            assert!(v.im.abs() < 1e-6);
        }
    }

    #[test]
    fn fourier_of_lorentzian_decays_exponentially() {
        let s = 0.5;
        let taus = [0.5, 1.0, 2.0, 4.0];
        let vals = fourier_series(
            |w| Complex64::new(1.0 / (s * s + w * w), 0.0),
            -4000.0,
            4000.0,
            &taus,
            Tolerance::with_abs(1e-10, 1e-13),
            &[-s, 0.0, s],
        )
        .unwrap();
        for (&t, v) in taus.iter().zip(&vals) {
            let expect = (-s * t).exp() / (2.0 * s);
            assert_relative_eq!(v.re, expect, max_relative = 1e-2);
        }
    }

    #[test]
    fn bisection_finds_roots() {
        assert_relative_eq!(
            find_root(|x| x - 1.0, (0.0, 2.0)).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            find_root(|x| x.sin(), (3.0, 3.3)).unwrap(),
            PI,
            max_relative = 1e-10
        );
        assert!(matches!(
            find_root(|x| x * x + 1.0, (0.0, 1.0)),
            Err(Error::BadBracket { .. })
        ));
    }

    #[test]
    fn sinc_at_zero_and_pi() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(PI).abs() < 1e-15);
    }
}

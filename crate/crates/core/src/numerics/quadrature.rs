//! Adaptive Gauss–Kronrod (7/15) quadrature with global interval bisection.
//!
//! Semi-infinite ranges `[lo, +inf)` are mapped onto `(0, 1)` with
//! `x = lo + L u / (1 - u)`, where `L` is the length scale carried by the
//! [`TailPolicy`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// How a `+inf` upper limit is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Map `[lo, inf)` onto `(0, 1)` with the given length scale.
    Mapped { scale: f64 },
    /// Integrate over `[lo, upper]` only and require the integrand at `upper`
    /// to be below `abs_tol` (the tail bound check).
    Truncated { upper: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail: TailPolicy,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail: TailPolicy::Mapped { scale: 1.0 },
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::validation("rel_tol", "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::validation("abs_tol", "must be positive"));
        }
        if self.max_subdivisions < 16 {
            return Err(Error::validation("max_subdivisions", "must be at least 16"));
        }
        match self.tail {
            TailPolicy::Mapped { scale } if !(scale > 0.0 && scale.is_finite()) => {
                Err(Error::validation("tail.scale", "must be positive and finite"))
            }
            TailPolicy::Truncated { upper } if !upper.is_finite() => {
                Err(Error::validation("tail.upper", "must be finite"))
            }
            _ => Ok(()),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.tail = TailPolicy::Mapped { scale };
        self
    }

    pub fn with_tolerance(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

/// Value and error estimate of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F>(f: &mut F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::domain("integrate", "integrand produced a non-finite value"));
    }
    Ok((value, err))
}

fn adaptive<F>(f: &mut F, lo: f64, hi: f64, settings: &QuadratureSettings) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (value, error) = kronrod15(f, lo, hi)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 1;
    loop {
        if total_err <= settings.abs_tol.max(settings.rel_tol * total.abs()) {
            break;
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total,
                abs_error: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine precision; accept what we have
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod15(f, worst.lo, mid)?;
        let (v2, e2) = kronrod15(f, mid, worst.hi)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // resum to limit drift in the running totals
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let abs_error: f64 = heap.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        abs_error,
        evaluations,
    })
}

/// Integrate a fallible integrand over `[lo, hi]`; `hi` may be `f64::INFINITY`.
pub fn try_integrate_detailed<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    settings.validate()?;
    if lo.is_nan() || hi.is_nan() || lo.is_infinite() {
        return Err(Error::domain("integrate", "limits must be finite numbers (upper may be +inf)"));
    }
    if hi < lo {
        let r = try_integrate_detailed(f, hi, lo, settings)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    if hi == lo {
        return Ok(QuadratureResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    if hi.is_finite() {
        return adaptive(&mut f, lo, hi, settings);
    }
    match settings.tail {
        TailPolicy::Mapped { scale } => {
            let mut g = |u: f64| -> Result<f64> {
                let one_minus = 1.0 - u;
                let x = lo + scale * u / one_minus;
                let jac = scale / (one_minus * one_minus);
                let v = f(x)?;
                Ok(if v == 0.0 { 0.0 } else { v * jac })
            };
            adaptive(&mut g, 0.0, 1.0, settings)
        }
        TailPolicy::Truncated { upper } => {
            if upper <= lo {
                return Err(Error::validation("tail.upper", "must exceed the lower limit"));
            }
            let tail_value = f(upper)?.abs();
            if tail_value > settings.abs_tol {
                return Err(Error::Convergence {
                    estimate: f64::NAN,
                    abs_error: tail_value,
                });
            }
            adaptive(&mut f, lo, upper, settings)
        }
    }
}

pub fn try_integrate<F>(f: F, lo: f64, hi: f64, settings: &QuadratureSettings) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_detailed(f, lo, hi, settings).map(|r| r.value)
}

/// Integrate `f` over `[lo, hi]` (`hi` may be `f64::INFINITY`).
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, settings: &QuadratureSettings) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), lo, hi, settings)
}

/// Integrate piecewise over consecutive breakpoints. Breakpoints outside
/// `[lo, hi]` are ignored; the pieces share the tolerance settings.
pub fn try_integrate_piecewise<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut total = 0.0;
    let mut a = lo;
    for b in points.into_iter().chain(std::iter::once(hi)) {
        total += try_integrate(&mut f, a, b, settings)?;
        a = b;
    }
    Ok(total)
}

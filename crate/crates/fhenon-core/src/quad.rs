//! Globally adaptive Gauss-Kronrod quadrature (7-15 pair).
//!
//! The subdivision loop always splits the segment with the largest error
//! estimate, with ties broken by position, so results are deterministic.

use crate::error::{Error, Result};

// QUADPACK dqk15 nodes and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
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

#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts { rel_tol: 1e-12, abs_tol: 1e-300, max_evals: 2_000_000 }
    }
}

impl QuadOpts {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOpts { rel_tol, ..Self::default() }
    }
}

/// QUADPACK-style error rescaling for a Kronrod segment.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod panel: (integral, error estimate).
fn qk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for (j, wg) in WG.iter().enumerate().take(3) {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let v1 = f(center - x);
        let v2 = f(center + x);
        fv1[jtw] = v1;
        fv2[jtw] = v2;
        res_gauss += wg * (v1 + v2);
        res_kronrod += WGK[jtw] * (v1 + v2);
        res_abs += WGK[jtw] * (v1.abs() + v2.abs());
    }
    res_gauss += WG[3] * f_center;

    for j in 0..4 {
        let jtw = 2 * j;
        if jtw >= 7 {
            break;
        }
        let x = half * XGK[jtw];
        let v1 = f(center - x);
        let v2 = f(center + x);
        fv1[jtw] = v1;
        fv2[jtw] = v2;
        res_kronrod += WGK[jtw] * (v1 + v2);
        res_abs += WGK[jtw] * (v1.abs() + v2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let integral = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (integral, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integrate `f` over the consecutive intervals of `points`.
///
/// The breakpoints seed the segment list, so known singular or peaked
/// locations should appear among them.
pub fn integrate_segments<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], opts: &QuadOpts) -> Result<f64> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut evals = 0_usize;
    let mut segs: Vec<Segment> = Vec::with_capacity(64);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (value, err) = qk15(&mut f, a, b);
        evals += 15;
        if !value.is_finite() {
            return Err(Error::QuadratureNonFinite { a, b });
        }
        segs.push(Segment { a, b, value, err });
    }

    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        if evals >= opts.max_evals {
            return Err(Error::QuadratureBudget { evals, err: total_err });
        }
        // split the worst segment
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            if s.err > segs[worst].err {
                worst = i;
            }
        }
        let Segment { a, b, .. } = segs[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval at floating-point resolution; accept what we have
            let refinable: f64 = segs.iter().filter(|s| 0.5 * (s.a + s.b) > s.a).map(|s| s.err).sum();
            if refinable <= tol {
                return Ok(total);
            }
            return Err(Error::QuadratureBudget { evals, err: total_err });
        }
        let (v1, e1) = qk15(&mut f, a, mid);
        let (v2, e2) = qk15(&mut f, mid, b);
        evals += 30;
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::QuadratureNonFinite { a, b });
        }
        segs[worst] = Segment { a, b: mid, value: v1, err: e1 };
        segs.push(Segment { a: mid, b, value: v2, err: e2 });
    }
}

/// Integrate `f` over [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOpts) -> Result<f64> {
    integrate_segments(f, &[a, b], opts)
}

/// Geometrically graded breakpoints from `a` down toward `lo` (decreasing
/// spacing), returned ascending: lo, ..., a/4, a/2, a.
pub fn graded_breakpoints(lo: f64, a: f64) -> Vec<f64> {
    assert!(lo > 0.0 && a > lo);
    let mut pts = vec![a];
    let mut x = a;
    while x * 0.5 > lo {
        x *= 0.5;
        pts.push(x);
    }
    pts.push(lo);
    pts.reverse();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn smooth_integral() {
        let v = integrate(|x: f64| x.sin(), 0.0, PI, &QuadOpts::default()).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2, integrated over graded pieces
        let pts = graded_breakpoints(1e-14, 1.0);
        let v = integrate_segments(|x: f64| 1.0 / x.sqrt(), &pts, &QuadOpts::with_rel_tol(1e-10)).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-7);
    }

    #[test]
    fn decaying_exponential() {
        let v = integrate(|x: f64| (-2.0 * x).exp(), 0.0, 40.0, &QuadOpts::default()).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn budget_error_reported() {
        let opts = QuadOpts { rel_tol: 1e-15, abs_tol: 0.0, max_evals: 60 };
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &opts);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}

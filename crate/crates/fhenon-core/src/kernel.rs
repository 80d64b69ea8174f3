//! The 1D kernel K(t) of the reduced nonlocal operator.
//!
//! For N ≥ 2,
//!
//!   K(t) = a_{N,s} |S^{N-2}| 2^{-(N+2s)/2} ∫_0^π sin^{N-2}y (cosh t - cos y)^{-(N+2s)/2} dy,
//!
//! which follows from reducing the sphere integral in the defining formula
//! with 1 + e^{-2t} - 2 e^{-t} cos y = 2 e^{-t} (cosh t - cos y); the
//! exponential prefactor cancels, making K manifestly even. For N = 1 the
//! sphere S^0 is two points and K has a closed form.
//!
//! K behaves like κ₀ t^{-1-2s} at the origin and like c_∞ e^{-t(N+2s)/2} at
//! infinity. Everything here is computed with cosh t - cos y written as
//! 2(sinh²(t/2) + sin²(y/2)), which is exact and cancellation-free.

use crate::error::{Error, Result};
use crate::interp::CubicTable;
use crate::params::{fraclap_normalization, FracHenonParams};
use crate::quad::{integrate_segments, QuadOpts};
use crate::special::sphere_surface;

/// Lower end of the tabulated range; below it the singular law is exact to
/// better than table accuracy.
const TABLE_T_MIN: f64 = 1e-6;

/// Matching radius for the singular split used by the operator module.
pub const DEFAULT_H0: f64 = 0.5;

/// ∫_0^π sin^{N-2}θ (c0 + 4 w sin²(θ/2))^{-e} dθ for N ≥ 2, c0 > 0, w > 0.
///
/// When sqrt(c0/w) is small the integrand is peaked at θ = 0 on that scale;
/// the substitution θ = scale·sinh ξ flattens it for the adaptive rule.
pub(crate) fn angular_power_integral(dim: u32, e: f64, c0: f64, w: f64, opts: &QuadOpts) -> Result<f64> {
    assert!(dim >= 2);
    let np = dim as i32 - 2;
    let f = |theta: f64| -> f64 {
        let sh = (0.5 * theta).sin();
        theta.sin().powi(np) * (c0 + 4.0 * w * sh * sh).powf(-e)
    };
    let scale = (c0 / w).sqrt();
    if scale >= 0.5 {
        return integrate_segments(f, &[0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI], opts);
    }
    let y0 = 1.0_f64;
    let xi_max = (y0 / scale).asinh();
    let peak = integrate_segments(
        |xi: f64| {
            let theta = scale * xi.sinh();
            f(theta) * scale * xi.cosh()
        },
        &[0.0, 1.0, xi_max.min(8.0), xi_max],
        opts,
    )?;
    let rest = integrate_segments(f, &[y0, std::f64::consts::PI], opts)?;
    Ok(peak + rest)
}

/// Evaluator for K(t) at fixed (N, s); caches the constant prefactor.
#[derive(Debug, Clone)]
pub struct KernelEval {
    pub dim: u32,
    pub s: f64,
    /// (N + 2s)/2, the kernel decay rate and angular exponent.
    pub q: f64,
    prefactor: f64,
    a_ns: f64,
    opts: QuadOpts,
}

impl KernelEval {
    pub fn new(dim: u32, s: f64) -> Result<Self> {
        Self::with_rel_tol(dim, s, 1e-13)
    }

    pub fn with_rel_tol(dim: u32, s: f64, rel_tol: f64) -> Result<Self> {
        let a_ns = fraclap_normalization(dim, s)?;
        let n = dim as f64;
        let q = (n + 2.0 * s) / 2.0;
        let prefactor = if dim >= 2 {
            a_ns * sphere_surface(dim - 2) * 2.0_f64.powf(-q)
        } else {
            a_ns
        };
        Ok(KernelEval { dim, s, q, prefactor, a_ns, opts: QuadOpts { rel_tol, abs_tol: 1e-300, max_evals: 400_000 } })
    }

    /// K(t); even in t, domain error at t = 0.
    pub fn value(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::Domain("kernel is singular at t = 0".into()));
        }
        let t = t.abs();
        if self.dim == 1 {
            let e = -(1.0 + 2.0 * self.s);
            let sh = 2.0 * (0.5 * t).sinh();
            let ch = 2.0 * (0.5 * t).cosh();
            return Ok(self.a_ns * (sh.powf(e) + ch.powf(e)));
        }
        let c0 = 2.0 * (0.5 * t).sinh().powi(2);
        let theta = angular_power_integral(self.dim, self.q, c0, 0.5, &self.opts)?;
        Ok(self.prefactor * theta)
    }
}

/// K(t) as a one-shot call.
pub fn kernel_value(dim: u32, s: f64, t: f64) -> Result<f64> {
    KernelEval::new(dim, s)?.value(t)
}

/// κ₀ = lim_{t→0} t^{1+2s} K(t), by Richardson extrapolation over
/// t ∈ {1e-2, 1e-3, 1e-4} with the correction order estimated from the data.
pub fn singularity_coefficient(dim: u32, s: f64) -> Result<f64> {
    let eval = KernelEval::new(dim, s)?;
    let e = 1.0 + 2.0 * s;
    let ts: [f64; 3] = [1e-2, 1e-3, 1e-4];
    let mut k = [0.0_f64; 3];
    for (i, &t) in ts.iter().enumerate() {
        k[i] = t.powf(e) * eval.value(t)?;
    }
    let rel = ((k[1] - k[2]) / k[2]).abs();
    if rel > 1e-3 {
        return Err(Error::ExtrapolationUnstable { rel, limit: 1e-3 });
    }
    let d1 = k[0] - k[1];
    let d2 = k[1] - k[2];
    if d2.abs() <= 1e-14 * k[2].abs() || d1 / d2 <= 1.0 {
        return Ok(k[2]);
    }
    Ok(k[2] - d2 * d2 / (d1 - d2))
}

/// Tail coefficient fit result.
#[derive(Debug, Clone, Copy)]
pub struct TailFit {
    /// c_∞ = lim e^{t(N+2s)/2} K(t).
    pub c_inf: f64,
    /// Max deviation of ln K + (N+2s)/2·t from its mean over the fit window.
    pub residual: f64,
}

/// Estimate c_∞ from a log-linear fit (known slope) on t ∈ [8, 16].
pub fn tail_coefficient(dim: u32, s: f64) -> Result<TailFit> {
    let eval = KernelEval::new(dim, s)?;
    let sigma = (dim as f64 + 2.0 * s) / 2.0;
    let mut g = Vec::with_capacity(17);
    for j in 0..=16 {
        let t = 8.0 + 0.5 * j as f64;
        g.push(eval.value(t)?.ln() + sigma * t);
    }
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    let residual = g.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if residual > 1e-3 {
        return Err(Error::TailFit { residual, limit: 1e-3 });
    }
    Ok(TailFit { c_inf: mean.exp(), residual })
}

/// Tabulated kernel with asymptotic continuation on both ends.
///
/// Near the origin the table holds ln Φ against ln t with Φ = t^{1+2s} K(t)
/// (slowly varying); beyond t = 1 it holds ln K against t (almost linear).
/// Evaluation interpolates with local cubics and switches to the exact
/// asymptotic laws outside [1e-6, t_max].
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub params: FracHenonParams,
    /// Singularity coefficient κ₀.
    pub kappa0: f64,
    /// Tail coefficient c_∞.
    pub c_inf: f64,
    /// Matching radius for the operator's singular split.
    pub h0: f64,
    /// Tabulation horizon.
    pub t_max: f64,
    /// Max node spacing in the uniform region.
    pub resolution: f64,
    /// All node positions (ascending) with kernel values, for inspection and
    /// CSV export.
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    near: CubicTable,
    far: CubicTable,
    exp_sing: f64,
    sigma: f64,
}

impl KernelTable {
    /// Build the table. `t_max` must be at least 20 (default 30);
    /// `resolution` bounds the node spacing beyond t = 1.
    pub fn build(params: &FracHenonParams, t_max: f64, resolution: f64) -> Result<Self> {
        if t_max < 20.0 {
            return Err(Error::Domain(format!("t_max = {t_max} must be at least 20")));
        }
        if !(resolution > 0.0) {
            return Err(Error::Domain("resolution must be positive".into()));
        }
        let eval = KernelEval::new(params.dim, params.s)?;
        let exp_sing = 1.0 + 2.0 * params.s;
        let sigma = params.sigma_rate();

        // near region: log-spaced on [1e-6, 1]
        let ln_lo = TABLE_T_MIN.ln();
        let n_near = ((0.0 - ln_lo) / 0.025).ceil() as usize;
        let dln = (0.0 - ln_lo) / n_near as f64;
        let mut near_x = Vec::with_capacity(n_near + 1);
        let mut near_y = Vec::with_capacity(n_near + 1);
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for j in 0..=n_near {
            let lt = ln_lo + j as f64 * dln;
            let t = lt.exp();
            let k = eval.value(t)?;
            near_x.push(lt);
            near_y.push(exp_sing * lt + k.ln()); // ln Φ
            nodes.push(t);
            values.push(k);
        }

        // far region: uniform on [1, t_max]
        let spacing = resolution.min(0.025);
        let n_far = ((t_max - 1.0) / spacing).ceil() as usize;
        let dt = (t_max - 1.0) / n_far as f64;
        let mut far_x = Vec::with_capacity(n_far + 1);
        let mut far_y = Vec::with_capacity(n_far + 1);
        for j in 0..=n_far {
            let t = 1.0 + j as f64 * dt;
            let k = eval.value(t)?;
            far_x.push(t);
            far_y.push(k.ln());
            if j > 0 {
                nodes.push(t);
                values.push(k);
            }
        }

        let kappa0 = singularity_coefficient(params.dim, params.s)?;
        let tail = tail_coefficient(params.dim, params.s)?;

        Ok(KernelTable {
            params: *params,
            kappa0,
            c_inf: tail.c_inf,
            h0: DEFAULT_H0,
            t_max,
            resolution: dt,
            nodes,
            values,
            near: CubicTable::new(near_x, near_y),
            far: CubicTable::new(far_x, far_y),
            exp_sing,
            sigma,
        })
    }

    /// Interpolated K(|t|) with asymptotic continuation outside the table.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        if t < TABLE_T_MIN {
            return self.kappa0 * t.powf(-self.exp_sing);
        }
        if t <= 1.0 {
            return (self.near.eval(t.ln()) - self.exp_sing * t.ln()).exp();
        }
        if t <= self.t_max {
            return self.far.eval(t).exp();
        }
        self.c_inf * (-self.sigma * t).exp()
    }

    /// ∫_T^∞ K dt under the tail law, closed form.
    pub fn tail_integral(&self, from: f64) -> f64 {
        self.c_inf / self.sigma * (-self.sigma * from).exp()
    }
}

/// The zero-order constant evaluated straight from its defining double
/// integral (weight (1 - ρ^β) against the angular kernel), as an independent
/// cross-check of the Gamma-function formula.
///
/// Folding ρ → 1/ρ maps the principal-value integral over (1, ∞) onto (0, 1)
/// and turns the radial weight into the manifestly positive
/// (ρ^{(N-1)/2} - ρ^{(2s-1)/2})², leaving an absolutely convergent integrand.
pub fn zero_order_from_integral(dim: u32, s: f64) -> Result<f64> {
    let params_probe = FracHenonParams::new(dim, s, 0.0)?;
    let n = dim as f64;
    let q = (n + 2.0 * s) / 2.0;
    let gamma = params_probe.gamma_rate();
    let a_ns = fraclap_normalization(dim, s)?;
    let inner_opts = QuadOpts { rel_tol: 1e-11, abs_tol: 1e-300, max_evals: 400_000 };
    let outer_opts = QuadOpts { rel_tol: 1e-9, abs_tol: 1e-300, max_evals: 3_000_000 };

    let radial_weight = |rho: f64| -> f64 {
        // (ρ^{(N-1)/2} - ρ^{(2s-1)/2})², via expm1 for stability near ρ = 1
        let d = rho.powf((2.0 * s - 1.0) / 2.0) * (gamma * rho.ln()).exp_m1();
        d * d
    };

    let integrand = |rho: f64| -> f64 {
        let b = radial_weight(rho);
        if b == 0.0 {
            return 0.0;
        }
        let k = if dim >= 2 {
            let c0 = (1.0 - rho) * (1.0 - rho);
            angular_power_integral(dim, q, c0, rho, &inner_opts).unwrap_or(f64::NAN)
        } else {
            (1.0 - rho).powf(-(1.0 + 2.0 * s)) + (1.0 + rho).powf(-(1.0 + 2.0 * s))
        };
        b * k
    };

    // integrate to 1 - 2^-40 and complete the (1-ρ)^{1-2s} endpoint analytically
    let rho_c = 1.0 - 2.0_f64.powi(-40);
    let mut pts = vec![0.0, 0.25];
    let mut g = 0.5;
    while 1.0 - g > 1e-12 && g < rho_c {
        pts.push(g);
        g = 0.5 * (g + 1.0);
    }
    pts.push(rho_c);
    let main = integrate_segments(integrand, &pts, &outer_opts)?;
    let endpoint = integrand(rho_c) * (1.0 - rho_c) / (2.0 - 2.0 * s);

    let prefactor = if dim >= 2 { a_ns * sphere_surface(dim - 2) } else { a_ns };
    Ok(prefactor * (main + endpoint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{fraclap_normalization, zero_order_constant};
    use approx::assert_relative_eq;

    fn params(dim: u32, s: f64) -> FracHenonParams {
        FracHenonParams::new(dim, s, 0.0).unwrap()
    }

    #[test]
    fn kernel_even_and_positive() {
        let eval = KernelEval::new(3, 0.5).unwrap();
        let kp = eval.value(1.0).unwrap();
        let km = eval.value(-1.0).unwrap();
        assert_eq!(kp, km);
        assert!(kp > 0.0);
        assert!(eval.value(0.0).is_err());
    }

    #[test]
    fn kernel_one_dimensional_closed_form() {
        let s = 0.4;
        let eval = KernelEval::new(1, s).unwrap();
        let a = fraclap_normalization(1, s).unwrap();
        let t: f64 = 0.8;
        let expect = a
            * ((2.0 * (t / 2.0).sinh()).powf(-(1.0 + 2.0 * s))
                + (2.0 * (t / 2.0).cosh()).powf(-(1.0 + 2.0 * s)));
        assert_relative_eq!(eval.value(t).unwrap(), expect, max_relative = 1e-14);
    }

    #[test]
    fn singularity_law_near_zero() {
        // t^{1+2s} K(t) at t = 1e-3 within 1% of κ₀
        for &(dim, s) in &[(3u32, 0.5_f64), (3, 0.75), (4, 0.6)] {
            let eval = KernelEval::new(dim, s).unwrap();
            let kappa0 = singularity_coefficient(dim, s).unwrap();
            let t: f64 = 1e-3;
            let ratio = t.powf(1.0 + 2.0 * s) * eval.value(t).unwrap() / kappa0;
            assert!((ratio - 1.0).abs() < 1e-2, "ratio {ratio} at ({dim},{s})");
            // and much closer at t = 1e-5
            let t: f64 = 1e-5;
            let ratio = t.powf(1.0 + 2.0 * s) * eval.value(t).unwrap() / kappa0;
            assert!((ratio - 1.0).abs() < 5e-3, "ratio {ratio} at t=1e-5");
        }
    }

    #[test]
    fn singularity_coefficient_matches_dimensional_reduction() {
        // κ₀ = a_{N,s} |S^{N-2}| B((N-1)/2, (1+2s)/2) / 2 collapses to a_{1,s}:
        // the reduced kernel carries the 1D fractional Laplacian at its
        // singularity. Verified against the extrapolated value.
        for &(dim, s) in &[(2u32, 0.4_f64), (3, 0.3), (3, 0.5), (3, 0.7), (4, 0.6)] {
            let kappa0 = singularity_coefficient(dim, s).unwrap();
            let a1 = fraclap_normalization(1, s).unwrap();
            assert_relative_eq!(kappa0, a1, max_relative = 2e-5);
            assert!(kappa0 > 0.0);
        }
    }

    #[test]
    fn tail_law() {
        for &(dim, s) in &[(3u32, 0.5_f64), (3, 0.75)] {
            let eval = KernelEval::new(dim, s).unwrap();
            let fit = tail_coefficient(dim, s).unwrap();
            assert!(fit.c_inf > 0.0);
            assert!(fit.residual < 1e-6, "residual {}", fit.residual);
            let sigma = (dim as f64 + 2.0 * s) / 2.0;
            // e^{σt} K varies by < 1% over [12, 16]
            let g12 = (sigma * 12.0).exp() * eval.value(12.0).unwrap();
            let g16 = (sigma * 16.0).exp() * eval.value(16.0).unwrap();
            assert!((g12 / g16 - 1.0).abs() < 1e-2);
            // analytic limit: c_∞ = a_{N,s} |S^{N-1}|
            let expect = fraclap_normalization(dim, s).unwrap() * sphere_surface(dim - 1);
            assert_relative_eq!(fit.c_inf, expect, max_relative = 1e-6);
        }
    }

    #[test]
    fn table_reproduces_kernel_off_nodes() {
        let p = params(3, 0.5);
        let table = KernelTable::build(&p, 30.0, 0.05).unwrap();
        let eval = KernelEval::new(3, 0.5).unwrap();
        // off-node probes across all regions
        for &t in &[1.7e-6, 3.3e-5, 4.7e-4, 8.9e-3, 0.0513, 0.347, 0.913, 1.0107, 2.71, 7.77, 13.13, 25.501] {
            let exact = eval.value(t).unwrap();
            let interp = table.eval(t);
            assert_relative_eq!(interp, exact, max_relative = 1e-6);
        }
        // asymptotic continuations
        assert_relative_eq!(table.eval(1e-8), table.kappa0 * 1e-8_f64.powf(-2.0), max_relative = 1e-5);
        let t = 31.0;
        assert_relative_eq!(table.eval(t), table.c_inf * (-2.0 * t).exp(), max_relative = 1e-6);
    }

    #[test]
    fn table_strictly_decreasing() {
        let p = params(3, 0.75);
        let table = KernelTable::build(&p, 30.0, 0.05).unwrap();
        assert!(table.values.windows(2).all(|w| w[0] > w[1]));
        let mut prev = table.eval(1e-4);
        for j in 1..1000 {
            let t = 1e-4 + j as f64 * 0.02;
            let v = table.eval(t);
            assert!(v < prev, "not decreasing at t = {t}");
            prev = v;
        }
    }

    #[test]
    fn tail_mass_beyond_horizon_is_negligible() {
        let p = params(3, 0.5);
        let table = KernelTable::build(&p, 30.0, 0.05).unwrap();
        // ∫_30^∞ c_∞ e^{-2t} dt = c_∞ e^{-60}/2
        let tail = table.tail_integral(30.0);
        assert!(tail < 1e-12, "tail {tail:.3e}");
        assert_relative_eq!(tail, table.c_inf * (-60.0_f64).exp() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn kernel_in_weighted_l1_under_refinement() {
        // ∫ min(t², 1) K(t) dt over (0, ∞), computed by composite Simpson in
        // z = ln t; doubling the mesh moves the value by < 1e-6 relative.
        let p = params(3, 0.5);
        let table = KernelTable::build(&p, 30.0, 0.05).unwrap();
        let f = |z: f64| {
            let t = z.exp();
            t.min(1.0).powi(2).min(1.0) * table.eval(t) * t
        };
        let simpson_on = |a: f64, b: f64, m: usize| {
            let h = (b - a) / m as f64;
            let mut acc = f(a) + f(b);
            for j in 1..m {
                acc += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        };
        // split at t = 1 where the weight min(t², 1) has a kink
        let simpson = |m: usize| simpson_on(-40.0, 0.0, m) + simpson_on(0.0, 30.0_f64.ln(), m);
        let coarse = simpson(2000);
        let fine = simpson(4000);
        assert!(
            ((fine - coarse) / fine).abs() < 1e-6,
            "refinement change {:.3e}",
            ((fine - coarse) / fine).abs()
        );
        assert!(fine.is_finite() && fine > 0.0);
    }

    #[test]
    fn zero_order_integral_matches_formula() {
        for &(dim, s) in &[(3u32, 0.5_f64), (1, 0.4)] {
            let via_integral = zero_order_from_integral(dim, s).unwrap();
            let formula = zero_order_constant(dim, s).unwrap();
            assert_relative_eq!(via_integral, formula, max_relative = 1e-5);
            assert!(via_integral > 0.0);
        }
    }
}

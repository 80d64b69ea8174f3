//! Discretization of the reduced nonlocal operator
//!
//!   T v̄(κ) = ∫_0^∞ (2 v̄(κ) - v̄(κ+t) - v̄(κ-t)) K(t) dt,
//!
//! on a symmetric uniform grid, with v̄ extended by zero outside [-L, L].
//!
//! The quadrature splits at the lag h0: on (0, h0] the full kernel is written
//! K(t) = Φ(t) t^{-1-2s} with Φ = t^{1+2s} K slowly varying, and the product
//! Φ·(second difference) is integrated against the exact power moments of
//! t^{-1-2s} through piecewise-quadratic interpolants (the second-difference
//! values vanish at t = 0, so the first cell uses an even {t², t⁴} model).
//! On [h0, t_max] composite Simpson applies. Beyond the horizon only the
//! diagonal 2 v̄(κ) ∫ K survives, which the exponential tail law integrates in
//! closed form. The resulting weights are a symmetric Toeplitz stencil, so
//! the operator matrix is symmetric positive semidefinite by construction.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Profile};
use crate::kernel::KernelTable;
use crate::params::{power_symbol, FracHenonParams};
use nalgebra::DMatrix;

/// ∫_a^b t^{e-1} dt, stable for small e; a = 0 allowed when e > 0.
fn power_moment(e: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 {
        debug_assert!(e > 0.0);
        return b.powf(e) / e;
    }
    if e == 0.0 {
        return (b / a).ln();
    }
    a.powf(e) * (e * (b / a).ln()).exp_m1() / e
}

/// Quadratic-interpolant product weights on [lo, hi] against t^{-1-2s} for
/// Lagrange nodes (x0, x1, x2) with uniform spacing h.
fn lagrange3_weights(two_s: f64, lo: f64, hi: f64, x0: f64, h: f64) -> [f64; 3] {
    let (x1, x2) = (x0 + h, x0 + 2.0 * h);
    let m0 = power_moment(-two_s, lo, hi);
    let m1 = power_moment(1.0 - two_s, lo, hi);
    let m2 = power_moment(2.0 - two_s, lo, hi);
    let h2 = h * h;
    [
        (m2 - (x1 + x2) * m1 + x1 * x2 * m0) / (2.0 * h2),
        -(m2 - (x0 + x2) * m1 + x0 * x2 * m0) / h2,
        (m2 - (x0 + x1) * m1 + x0 * x1 * m0) / (2.0 * h2),
    ]
}

/// Discrete T with its quadrature weights, plus the zero-order constant of
/// the reduced equation.
#[derive(Debug, Clone)]
pub struct ReducedOperator {
    pub grid: Grid1D,
    pub params: FracHenonParams,
    /// Zero-order constant A_{s,N}.
    pub a_sn: f64,
    /// Toeplitz weights W[k] multiplying (2v_i - v_{i+k} - v_{i-k}); W[0] = 0.
    weights: Vec<f64>,
    /// Independent weights for the seminorm quadrature (different near-field
    /// stencils and trapezoid far field).
    sem_weights: Vec<f64>,
    /// Diagonal closure 2 ∫_{t_max}^∞ K for the truncated tail.
    tail_diag: f64,
    /// Number of near-field lags (h0 = near_lags · h).
    near_lags: usize,
}

impl ReducedOperator {
    pub fn assemble(grid: &Grid1D, table: &KernelTable) -> Result<Self> {
        let h = grid.spacing;
        if table.resolution > h * (1.0 + 1e-12) {
            return Err(Error::Resolution { table: table.resolution, grid: h });
        }
        let params = table.params;
        let two_s = 2.0 * params.s;
        let exp_sing = 1.0 + two_s;

        // near-field lag count: h0/h rounded, clamped, even
        let mut m0 = (table.h0 / h).round() as usize;
        m0 = m0.clamp(2, 1 << 20);
        if m0 % 2 == 1 {
            m0 += 1;
        }
        let horizon = table.t_max.min(2.0 * grid.half_width);
        let mut k_max = (horizon / h + 1e-9).floor() as usize;
        if k_max < m0 + 2 {
            return Err(Error::Domain(format!(
                "grid half-width {} too small for the kernel horizon",
                grid.half_width
            )));
        }
        if (k_max - m0) % 2 == 1 {
            k_max -= 1;
        }

        let t_at = |k: usize| k as f64 * h;
        let phi = |k: usize| t_at(k).powf(exp_sing) * table.eval(t_at(k));

        // ---- main weights ----
        let mut w = vec![0.0_f64; k_max + 1];
        // first double cell [0, 2h]: even model c2 t² + c4 t⁴ through lags 1, 2
        let m2a = power_moment(2.0 - two_s, 0.0, 2.0 * h);
        let m4a = power_moment(4.0 - two_s, 0.0, 2.0 * h);
        let h2 = h * h;
        w[1] += (16.0 * m2a - 4.0 * m4a / h2) / (12.0 * h2) * phi(1);
        w[2] += (m4a / h2 - m2a) / (12.0 * h2) * phi(2);
        // paired cells [2jh, (2j+2)h] with quadratic interpolants
        let mut j = 1;
        while 2 * (j + 1) <= m0 {
            let a = t_at(2 * j);
            let b = t_at(2 * j + 2);
            let lw = lagrange3_weights(two_s, a, b, a, h);
            for (o, lwv) in lw.iter().enumerate() {
                w[2 * j + o] += lwv * phi(2 * j + o);
            }
            j += 1;
        }
        // composite Simpson on [m0 h, k_max h]
        for k in m0..=k_max {
            let coeff = if k == m0 || k == k_max {
                1.0 / 3.0
            } else if (k - m0) % 2 == 1 {
                4.0 / 3.0
            } else {
                2.0 / 3.0
            };
            w[k] += coeff * h * table.eval(t_at(k));
        }

        // ---- independent seminorm weights ----
        let mut sw = vec![0.0_f64; k_max + 1];
        // first cell [0, h]: pure t² model through lag 1
        sw[1] += power_moment(2.0 - two_s, 0.0, h) / h2 * phi(1);
        // single cells [kh, (k+1)h] with centered quadratics
        for k in 1..m0 {
            let x0 = if k == 1 { t_at(1) } else { t_at(k - 1) };
            let lw = lagrange3_weights(two_s, t_at(k), t_at(k + 1), x0, h);
            let base = if k == 1 { 1 } else { k - 1 };
            for (o, lwv) in lw.iter().enumerate() {
                sw[base + o] += lwv * phi(base + o);
            }
        }
        // trapezoid far field
        for k in m0..=k_max {
            let coeff = if k == m0 || k == k_max { 0.5 } else { 1.0 };
            sw[k] += coeff * h * table.eval(t_at(k));
        }

        let tail_diag = 2.0 * table.tail_integral(t_at(k_max));

        Ok(ReducedOperator {
            grid: *grid,
            params,
            a_sn: crate::params::zero_order_constant(params.dim, params.s)?,
            weights: w,
            sem_weights: sw,
            tail_diag,
            near_lags: m0,
        })
    }

    pub fn lag_count(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn h0_effective(&self) -> f64 {
        self.near_lags as f64 * self.grid.spacing
    }

    /// T v at every node (zero extension outside the grid).
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        debug_assert_eq!(n, self.grid.len);
        let k_max = self.lag_count();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let vi = v[i];
            let mut acc = self.tail_diag * vi;
            for k in 1..=k_max {
                let vp = if i + k < n { v[i + k] } else { 0.0 };
                let vm = if i >= k { v[i - k] } else { 0.0 };
                acc += self.weights[k] * (2.0 * vi - vp - vm);
            }
            out[i] = acc;
        }
        out
    }

    /// T v at a single node.
    pub fn apply_at(&self, v: &[f64], i: usize) -> f64 {
        let n = v.len();
        let vi = v[i];
        let mut acc = self.tail_diag * vi;
        for k in 1..=self.lag_count() {
            let vp = if i + k < n { v[i + k] } else { 0.0 };
            let vm = if i >= k { v[i - k] } else { 0.0 };
            acc += self.weights[k] * (2.0 * vi - vp - vm);
        }
        acc
    }

    /// Residual F = T v + A v - f(v) with f(v) = sign(v) |v|^{p*}, and its
    /// max norm. The odd extension keeps the map C¹ through v = 0.
    pub fn residual(&self, profile: &Profile) -> (Vec<f64>, f64) {
        let p_star = profile.params.p_star;
        let mut f = self.apply(&profile.values);
        let mut norm = 0.0_f64;
        for (fi, &v) in f.iter_mut().zip(&profile.values) {
            *fi += self.a_sn * v - nonlinearity(v, p_star);
            norm = norm.max(fi.abs());
        }
        (f, norm)
    }

    /// Dense matrix of the discrete T (symmetric, positive semidefinite).
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.grid.len;
        let k_max = self.lag_count();
        let diag = 2.0 * self.weights[1..].iter().sum::<f64>() + self.tail_diag;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag;
            for k in 1..=k_max {
                if i + k < n {
                    m[(i, i + k)] = -self.weights[k];
                }
                if i >= k {
                    m[(i, i - k)] = -self.weights[k];
                }
            }
        }
        m
    }

    /// Jacobian of the residual: M_K + A I - p* diag(|v|^{p*-1}).
    pub fn jacobian(&self, profile: &Profile) -> DMatrix<f64> {
        let mut j = self.matrix();
        let p_star = profile.params.p_star;
        for (i, &v) in profile.values.iter().enumerate() {
            j[(i, i)] += self.a_sn - nonlinearity_prime(v, p_star);
        }
        j
    }

    /// Discrete energy
    ///   E(v) = h ( ½⟨(M_K + A) v, v⟩ - Σ |v_i|^{p*+1}/(p*+1) ),
    /// whose exact gradient is h × residual.
    pub fn energy(&self, profile: &Profile) -> f64 {
        let v = &profile.values;
        let tv = self.apply(v);
        let p1 = profile.params.p_star + 1.0;
        let mut quad = 0.0;
        let mut pot = 0.0;
        for (vi, tvi) in v.iter().zip(&tv) {
            quad += vi * (tvi + self.a_sn * vi);
            pot += vi.abs().powf(p1) / p1;
        }
        self.grid.spacing * (0.5 * quad - pot)
    }

    /// Seminorm induced by the operator quadrature: 2h ⟨T v, v⟩. Pairing the
    /// discrete equation with v uses this form.
    pub fn quadratic_seminorm(&self, profile: &Profile) -> f64 {
        let tv = self.apply(&profile.values);
        2.0 * self.grid.spacing * profile.values.iter().zip(&tv).map(|(a, b)| a * b).sum::<f64>()
    }

    /// H^s_K seminorm ∬ (v(κ) - v(τ))² K(κ-τ) dτ dκ by an independent
    /// product quadrature (squared first differences against the kernel; the
    /// square already makes the integrand integrable).
    pub fn hs_seminorm(&self, profile: &Profile) -> f64 {
        let v = &profile.values;
        let n = v.len();
        let k_max = self.lag_count();
        let mut total = 0.0;
        for i in 0..n {
            let vi = v[i];
            let mut acc = self.tail_diag * vi * vi;
            for k in 1..=k_max {
                let vp = if i + k < n { v[i + k] } else { 0.0 };
                let vm = if i >= k { v[i - k] } else { 0.0 };
                let g = (vi - vp) * (vi - vp) + (vi - vm) * (vi - vm);
                acc += self.sem_weights[k] * g;
            }
            total += acc;
        }
        self.grid.spacing * total
    }
}

/// f(v) = sign(v) |v|^{p*}.
pub fn nonlinearity(v: f64, p_star: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    v.signum() * v.abs().powf(p_star)
}

/// f'(v) = p* |v|^{p*-1}.
pub fn nonlinearity_prime(v: f64, p_star: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    p_star * v.abs().powf(p_star - 1.0)
}

/// Truncated exponential profile v_μ(κ) = e^{κ(μ-β)} on the grid.
pub fn exponential_profile(grid: &Grid1D, params: &FracHenonParams, mu: f64) -> Profile {
    let rate = mu - params.beta;
    Profile::from_fn(*grid, *params, |k| (rate * k).exp()).expect("finite exponential profile")
}

/// Max relative defect of (T v_μ + A v_μ) / v_μ against c(μ) over the central
/// third of the grid; v_μ is an exact eigenfunction of the continuum operator
/// for -N < μ < 2s.
pub fn exponential_identity_defect(op: &ReducedOperator, mu: f64) -> Result<f64> {
    let params = op.params;
    let c = power_symbol(mu, params.dim, params.s)?;
    let prof = exponential_profile(&op.grid, &params, mu);
    let tv = op.apply(&prof.values);
    let third = op.grid.half_width / 3.0;
    let mut worst = 0.0_f64;
    for i in 0..op.grid.len {
        if op.grid.node(i).abs() > third {
            continue;
        }
        let ratio = (tv[i] + op.a_sn * prof.values[i]) / prof.values[i];
        let denom = if c == 0.0 { 1.0 } else { c.abs() };
        worst = worst.max((ratio - c).abs() / denom);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelTable;
    use approx::assert_relative_eq;

    fn setup(dim: u32, s: f64, l: f64, h: f64) -> (Grid1D, KernelTable, ReducedOperator) {
        let params = FracHenonParams::new(dim, s, 0.0).unwrap();
        let grid = Grid1D::new(l, h).unwrap();
        let table = KernelTable::build(&params, 30.0, h).unwrap();
        let op = ReducedOperator::assemble(&grid, &table).unwrap();
        (grid, table, op)
    }

    #[test]
    fn resolution_precondition() {
        let params = FracHenonParams::new(3, 0.5, 0.0).unwrap();
        let grid = Grid1D::new(10.0, 0.01).unwrap();
        let table = KernelTable::build(&params, 30.0, 0.05).unwrap();
        // table resolution is capped at 0.025 internally, still coarser than h = 0.01
        assert!(matches!(
            ReducedOperator::assemble(&grid, &table),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn apply_is_linear() {
        let (grid, _, op) = setup(3, 0.5, 10.0, 0.1);
        let params = op.params;
        let u = Profile::from_fn(grid, params, |k| (-k * k).exp()).unwrap();
        let w = Profile::from_fn(grid, params, |k| 1.0 / (1.0 + k * k)).unwrap();
        let combo: Vec<f64> = u
            .values
            .iter()
            .zip(&w.values)
            .map(|(a, b)| 1.7 * a - 0.3 * b)
            .collect();
        let t_combo = op.apply(&combo);
        let tu = op.apply(&u.values);
        let tw = op.apply(&w.values);
        for i in 0..grid.len {
            let lin = 1.7 * tu[i] - 0.3 * tw[i];
            assert!((t_combo[i] - lin).abs() <= 1e-12 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn constant_profile_sees_only_truncation() {
        // T annihilates constants on the line; on the truncated grid the
        // defect at interior nodes is the mass of K beyond the distance to
        // the boundary, which shrinks as L grows.
        let (grid, table, op) = setup(3, 0.5, 10.0, 0.1);
        let ones = vec![1.0; grid.len];
        let tv = op.apply(&ones);
        let center = tv[grid.center()];
        let bound = 2.0 * table.tail_integral(grid.half_width);
        assert!(center > 0.0 && center < 2.0 * bound, "center defect {center:.3e} vs bound {bound:.3e}");

        let (grid2, _, op2) = setup(3, 0.5, 20.0, 0.1);
        let tv2 = op2.apply(&vec![1.0; grid2.len]);
        assert!(tv2[grid2.center()] < 0.1 * center);
    }

    #[test]
    fn residual_of_zero_profile_vanishes() {
        let (grid, _, op) = setup(3, 0.5, 10.0, 0.1);
        let zero = Profile::new(grid, vec![0.0; grid.len], op.params).unwrap();
        let (f, norm) = op.residual(&zero);
        assert_eq!(norm, 0.0);
        assert!(f.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn jacobian_is_symmetric_and_matches_finite_differences() {
        let (grid, _, op) = setup(3, 0.6, 6.0, 0.1);
        let params = FracHenonParams::new(3, 0.6, 1.0).unwrap();
        let prof = Profile::from_fn(grid, params, |k| 0.8 * (-0.5 * k * k).exp()).unwrap();
        let j = op.jacobian(&prof);

        // symmetry
        let mut max_asym = 0.0_f64;
        let mut max_abs = 0.0_f64;
        for r in 0..grid.len {
            for c in 0..grid.len {
                max_asym = max_asym.max((j[(r, c)] - j[(c, r)]).abs());
                max_abs = max_abs.max(j[(r, c)].abs());
            }
        }
        assert!(max_asym <= 1e-12 * max_abs);

        // J·d against central differences of the residual
        let d: Vec<f64> = (0..grid.len)
            .map(|i| (0.3 * grid.node(i)).sin() * (-0.2 * grid.node(i) * grid.node(i)).exp())
            .collect();
        let eps = 1e-6;
        let mut vp = prof.clone();
        let mut vm = prof.clone();
        for i in 0..grid.len {
            vp.values[i] += eps * d[i];
            vm.values[i] -= eps * d[i];
        }
        let (fp, _) = op.residual(&vp);
        let (fm, _) = op.residual(&vm);
        let scale = fp.iter().map(|x| x.abs()).fold(0.0, f64::max) / eps;
        for i in 0..grid.len {
            let fd = (fp[i] - fm[i]) / (2.0 * eps);
            let jd: f64 = (0..grid.len).map(|c| j[(i, c)] * d[c]).sum();
            assert!(
                (fd - jd).abs() <= 1e-6 * (1.0 + scale),
                "row {i}: fd {fd:.9e} vs jd {jd:.9e}"
            );
        }
    }

    #[test]
    fn jacobian_at_zero_is_positive_definite() {
        let (grid, _, op) = setup(3, 0.5, 6.0, 0.1);
        let zero = Profile::new(grid, vec![0.0; grid.len], op.params).unwrap();
        let j = op.jacobian(&zero);
        assert!(nalgebra::Cholesky::new(j).is_some());
    }

    #[test]
    fn energy_gradient_matches_residual() {
        let (grid, _, op) = setup(3, 0.5, 8.0, 0.1);
        let params = FracHenonParams::new(3, 0.5, 0.5).unwrap();
        let prof = Profile::from_fn(grid, params, |k| (-0.7 * k * k).exp()).unwrap();
        let dir: Vec<f64> = (0..grid.len).map(|i| (0.4 * grid.node(i)).cos()).collect();
        let eps = 1e-6;
        let mut pp = prof.clone();
        let mut pm = prof.clone();
        for i in 0..grid.len {
            pp.values[i] += eps * dir[i];
            pm.values[i] -= eps * dir[i];
        }
        let de = (op.energy(&pp) - op.energy(&pm)) / (2.0 * eps);
        let (f, _) = op.residual(&prof);
        let pairing: f64 = grid.spacing * f.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>();
        assert_relative_eq!(de, pairing, max_relative = 1e-6);
    }

    #[test]
    fn energy_zero_and_small_scaling() {
        let (grid, _, op) = setup(3, 0.5, 8.0, 0.1);
        let zero = Profile::new(grid, vec![0.0; grid.len], op.params).unwrap();
        assert_eq!(op.energy(&zero), 0.0);
        // E(t v) ~ t²/2 quadratic form > 0 for small t: zero is a strict local min
        let bump = Profile::from_fn(grid, op.params, |k| (-k * k).exp()).unwrap();
        for &t in &[1e-3, 1e-2] {
            let scaled = Profile::new(
                grid,
                bump.values.iter().map(|v| t * v).collect(),
                op.params,
            )
            .unwrap();
            let e = op.energy(&scaled);
            assert!(e > 0.0, "energy {e:.3e} at t = {t}");
            let quad = 0.25 * op.quadratic_seminorm(&scaled)
                + 0.5 * op.a_sn * grid.spacing * scaled.values.iter().map(|v| v * v).sum::<f64>();
            assert_relative_eq!(e, quad, max_relative = 1e-2);
        }
    }

    #[test]
    fn seminorm_homogeneity_and_parseval() {
        let (grid, _, op) = setup(3, 0.6, 8.0, 0.05);
        let prof = Profile::from_fn(grid, op.params, |k| (-0.5 * k * k).exp()).unwrap();
        let scaled = Profile::new(
            grid,
            prof.values.iter().map(|v| 2.5 * v).collect(),
            op.params,
        )
        .unwrap();
        let s1 = op.hs_seminorm(&prof);
        assert!(s1 > 0.0);
        assert_relative_eq!(op.hs_seminorm(&scaled), 6.25 * s1, max_relative = 1e-12);
        // zero profile
        let zero = Profile::new(grid, vec![0.0; grid.len], op.params).unwrap();
        assert_eq!(op.hs_seminorm(&zero), 0.0);
        // independent quadrature against 2⟨Tv, v⟩
        let parseval = op.quadratic_seminorm(&prof);
        assert_relative_eq!(s1, parseval, max_relative = 5e-4);
    }

    #[test]
    fn interior_maximum_principle() {
        let (grid, _, op) = setup(3, 0.5, 8.0, 0.1);
        let prof = Profile::from_fn(grid, op.params, |k| (-k * k).exp()).unwrap();
        let tv = op.apply(&prof.values);
        assert!(tv[grid.center()] > 0.0);
    }
}

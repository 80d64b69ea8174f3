//! Problem parameters, derived exponents, admissibility classification, and
//! the closed-form spectral constants of the reduced equation.
//!
//! Conventions: the fractional Laplacian carries its normalization constant
//! `a_{N,s} = 4^s Γ(N/2+s) / (π^{N/2} |Γ(-s)|)` everywhere, so the power
//! symbol c(μ) below holds with its Gamma-product form and the zero-order
//! constant of the reduced equation equals c(β) exactly.

use crate::error::{Error, Result};
use crate::special::{ln_abs_gamma, ln_gamma, sphere_surface};
use serde::{Deserialize, Serialize};

/// Problem instance (N, s, α) with the derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracHenonParams {
    /// Space dimension N ≥ 1, N > 2s.
    pub dim: u32,
    /// Fractional order s ∈ (0, 1).
    pub s: f64,
    /// Weight exponent α > -2s.
    pub alpha: f64,
    /// Critical exponent p* = (N + 2α + 2s) / (N - 2s).
    pub p_star: f64,
    /// Emden-Fowler exponent β = -(N - 2s)/2.
    pub beta: f64,
}

impl FracHenonParams {
    pub fn new(dim: u32, s: f64, alpha: f64) -> Result<Self> {
        validate_dim_s(dim, s)?;
        let n = dim as f64;
        if alpha <= -2.0 * s {
            return Err(Error::Domain(format!(
                "alpha = {alpha} must exceed -2s = {}",
                -2.0 * s
            )));
        }
        Ok(FracHenonParams {
            dim,
            s,
            alpha,
            p_star: critical_exponent(dim, s, alpha)?,
            beta: -(n - 2.0 * s) / 2.0,
        })
    }

    /// Same (N, s) with a different weight exponent.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        FracHenonParams::new(self.dim, self.s, alpha)
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    /// Decay rate (N - 2s)/2 of the reduced profile, = -β.
    pub fn gamma_rate(&self) -> f64 {
        -self.beta
    }

    /// Kernel decay rate (N + 2s)/2.
    pub fn sigma_rate(&self) -> f64 {
        (self.n() + 2.0 * self.s) / 2.0
    }
}

fn validate_dim_s(dim: u32, s: f64) -> Result<()> {
    if dim < 1 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("s = {s} must lie in (0, 1)")));
    }
    if dim as f64 <= 2.0 * s {
        return Err(Error::Domain(format!("need N > 2s, got N = {dim}, s = {s}")));
    }
    Ok(())
}

/// Critical exponent p*_{α,s} = (N + 2α + 2s) / (N - 2s).
pub fn critical_exponent(dim: u32, s: f64, alpha: f64) -> Result<f64> {
    validate_dim_s(dim, s)?;
    let n = dim as f64;
    Ok((n + 2.0 * alpha + 2.0 * s) / (n - 2.0 * s))
}

/// Exponent N + 2s + 2α - p (N - 2s); zero exactly at p = p*.
pub fn critical_identity_exponent(params: &FracHenonParams, p: f64) -> f64 {
    params.n() + 2.0 * params.s + 2.0 * params.alpha - p * (params.n() - 2.0 * params.s)
}

/// Where a given (N, s, α) sits relative to the existence theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdmissibilityClass {
    /// Classical positive radial solution exists (α ≥ 0 within range).
    ClassicalRange,
    /// Weak (variational) positive radial solution exists (-2s < α < 0).
    WeakRange,
    /// s < 1/2 and α ≥ 2s(N-1)/(1-2s): the reduced problem is supercritical.
    SupercriticalReduction,
    /// α ≤ -2s: no nonnegative locally bounded solution.
    NoSolutionRange,
}

/// Classify (N, s, α). The supercritical bound is strict: equality with
/// 2s(N-1)/(1-2s) already falls outside the admissible range.
pub fn classify_admissibility(dim: u32, s: f64, alpha: f64) -> Result<AdmissibilityClass> {
    validate_dim_s(dim, s)?;
    let n = dim as f64;
    if alpha <= -2.0 * s {
        return Ok(AdmissibilityClass::NoSolutionRange);
    }
    if alpha < 0.0 {
        return Ok(AdmissibilityClass::WeakRange);
    }
    if alpha == 0.0 || s >= 0.5 || alpha < 2.0 * s * (n - 1.0) / (1.0 - 2.0 * s) {
        return Ok(AdmissibilityClass::ClassicalRange);
    }
    Ok(AdmissibilityClass::SupercriticalReduction)
}

/// Normalization a_{N,s} = 4^s Γ(N/2 + s) / (π^{N/2} |Γ(-s)|) of the
/// fractional Laplacian.
pub fn fraclap_normalization(dim: u32, s: f64) -> Result<f64> {
    if dim < 1 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("s = {s} must lie in (0, 1)")));
    }
    let n = dim as f64;
    let (ln_gneg, _) = ln_abs_gamma(-s)?;
    let ln = 2.0 * s * 2.0_f64.ln() + ln_gamma(n / 2.0 + s) - (n / 2.0) * std::f64::consts::PI.ln() - ln_gneg;
    Ok(ln.exp())
}

/// Multiplier c(μ) in (-Δ)^s r^μ = c(μ) r^{μ-2s}, valid for -N < μ < 2s:
///
///   c(μ) = 4^s Γ((2s-μ)/2) Γ((N+μ)/2) / ( Γ((N+μ-2s)/2) Γ(-μ/2) ).
///
/// Vanishes at μ = 0 and μ = -N + 2s through the denominator poles, is
/// positive strictly between those zeros, negative outside them, and
/// strictly concave on (-N, 2s).
pub fn power_symbol(mu: f64, dim: u32, s: f64) -> Result<f64> {
    validate_dim_s(dim, s)?;
    let n = dim as f64;
    if mu <= -n || mu >= 2.0 * s {
        return Err(Error::Domain(format!("mu = {mu} outside (-N, 2s) = ({}, {})", -n, 2.0 * s)));
    }
    let d1 = (n + mu - 2.0 * s) / 2.0;
    let d2 = -mu / 2.0;
    // zeros of c: denominator Gamma poles at μ = -N+2s and μ = 0
    if d1 == 0.0 || d2 == 0.0 {
        return Ok(0.0);
    }
    let num = ln_gamma((2.0 * s - mu) / 2.0) + ln_gamma((n + mu) / 2.0);
    let (ln_d1, sg1) = ln_abs_gamma(d1)?;
    let (ln_d2, sg2) = ln_abs_gamma(d2)?;
    let ln = 2.0 * s * 2.0_f64.ln() + num - ln_d1 - ln_d2;
    Ok(sg1 * sg2 * ln.exp())
}

/// Zero-order constant of the reduced equation,
/// A_{s,N} = c(β) = 4^s Γ²((N+2s)/4) / Γ²((N-2s)/4) > 0.
pub fn zero_order_constant(dim: u32, s: f64) -> Result<f64> {
    validate_dim_s(dim, s)?;
    let n = dim as f64;
    let ln = 2.0 * s * 2.0_f64.ln() + 2.0 * ln_gamma((n + 2.0 * s) / 4.0) - 2.0 * ln_gamma((n - 2.0 * s) / 4.0);
    Ok(ln.exp())
}

/// Riesz potential normalization Γ((N-2s)/2) / (4^s π^{N/2} Γ(s)).
pub fn riesz_normalization(dim: u32, s: f64) -> Result<f64> {
    validate_dim_s(dim, s)?;
    let n = dim as f64;
    let ln = ln_gamma((n - 2.0 * s) / 2.0)
        - 2.0 * s * 2.0_f64.ln()
        - (n / 2.0) * std::f64::consts::PI.ln()
        - ln_gamma(s);
    Ok(ln.exp())
}

/// Closed-form spectral constants for one (N, s).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralConstants {
    /// Fractional Laplacian normalization a_{N,s}.
    pub normalization: f64,
    /// Zero-order constant A_{s,N} of the reduced equation.
    pub zero_order: f64,
    /// Kernel singularity coefficient κ₀ = lim t^{1+2s} K(t); equals the
    /// one-dimensional normalization a_{1,s}.
    pub kappa0: f64,
    /// Riesz kernel normalization.
    pub riesz: f64,
    /// Surface measures |S^{N-1}| and |S^{N-2}| (the latter is the reduced
    /// angular measure; 0 is stored for N = 1 where it is unused).
    pub sphere_n1: f64,
    pub sphere_n2: f64,
}

impl SpectralConstants {
    pub fn new(dim: u32, s: f64) -> Result<Self> {
        validate_dim_s(dim, s)?;
        Ok(SpectralConstants {
            normalization: fraclap_normalization(dim, s)?,
            zero_order: zero_order_constant(dim, s)?,
            kappa0: fraclap_normalization(1, s)?,
            riesz: riesz_normalization(dim, s)?,
            sphere_n1: sphere_surface(dim - 1),
            sphere_n2: if dim >= 2 { sphere_surface(dim - 2) } else { 0.0 },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn critical_exponent_values() {
        assert_relative_eq!(critical_exponent(3, 0.5, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(critical_exponent(3, 0.5, 1.0).unwrap(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(critical_exponent(3, 0.75, -1.0).unwrap(), 5.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn critical_exponent_domain_errors() {
        assert!(critical_exponent(1, 0.6, 0.0).is_err()); // N ≤ 2s
        assert!(critical_exponent(3, 1.0, 0.0).is_err());
        assert!(critical_exponent(3, 0.0, 0.0).is_err());
    }

    #[test]
    fn exponent_exceeds_one_iff_alpha_above_threshold() {
        for &(dim, s) in &[(2u32, 0.3), (3, 0.5), (4, 0.75), (5, 0.9)] {
            for i in 0..40 {
                let alpha = -2.0 * s + 0.02 + i as f64 * 0.25;
                let p = critical_exponent(dim, s, alpha).unwrap();
                assert!(p > 1.0, "p* = {p} at N={dim}, s={s}, alpha={alpha}");
            }
            let p_at = critical_exponent(dim, s, -2.0 * s).unwrap();
            assert_relative_eq!(p_at, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn admissibility_examples() {
        assert_eq!(classify_admissibility(3, 0.6, 1.0).unwrap(), AdmissibilityClass::ClassicalRange);
        // bound 2s(N-1)/(1-2s) = 2 is not strict: equality is already supercritical
        assert_eq!(
            classify_admissibility(3, 0.25, 2.0).unwrap(),
            AdmissibilityClass::SupercriticalReduction
        );
        assert_eq!(classify_admissibility(3, 0.5, -1.2).unwrap(), AdmissibilityClass::NoSolutionRange);
        assert_eq!(classify_admissibility(3, 0.3, -0.4).unwrap(), AdmissibilityClass::WeakRange);
        assert_eq!(classify_admissibility(3, 0.25, 1.9).unwrap(), AdmissibilityClass::ClassicalRange);
        assert_eq!(classify_admissibility(3, 0.25, 2.5).unwrap(), AdmissibilityClass::SupercriticalReduction);
        assert_eq!(classify_admissibility(3, 0.7, 0.0).unwrap(), AdmissibilityClass::ClassicalRange);
    }

    #[test]
    fn power_symbol_zeros_and_signs() {
        assert_eq!(power_symbol(0.0, 3, 0.5).unwrap(), 0.0);
        assert_eq!(power_symbol(-2.0, 3, 0.5).unwrap(), 0.0); // μ = -N + 2s
        // positive strictly inside (-N+2s, 0)
        for i in 1..20 {
            let mu = -2.0 + 2.0 * i as f64 / 20.0;
            assert!(power_symbol(mu, 3, 0.5).unwrap() > 0.0, "c({mu}) should be positive");
        }
        // negative on (0, 2s) and on (-N, -N+2s)
        assert!(power_symbol(0.5, 3, 0.5).unwrap() < 0.0);
        assert!(power_symbol(-2.5, 3, 0.5).unwrap() < 0.0);
    }

    #[test]
    fn power_symbol_domain() {
        assert!(power_symbol(-3.0, 3, 0.5).is_err());
        assert!(power_symbol(1.0, 3, 0.5).is_err());
    }

    #[test]
    fn power_symbol_concavity_on_grid() {
        for &(dim, s) in &[(3u32, 0.3), (3, 0.5), (3, 0.7), (4, 0.6)] {
            let n = dim as f64;
            let lo = -n + 0.05;
            let hi = 2.0 * s - 0.05;
            let m = 80;
            let dh = (hi - lo) / m as f64;
            for j in 1..m {
                let mu = lo + j as f64 * dh;
                let cm = power_symbol(mu - dh, dim, s).unwrap();
                let c0 = power_symbol(mu, dim, s).unwrap();
                let cp = power_symbol(mu + dh, dim, s).unwrap();
                let second = cp - 2.0 * c0 + cm;
                assert!(second <= 1e-10, "second difference {second:.3e} at mu={mu}, (N,s)=({dim},{s})");
            }
        }
    }

    #[test]
    fn zero_order_matches_symbol_at_beta() {
        for &(dim, s) in &[(3u32, 0.5), (3, 0.75), (4, 0.6), (2, 0.3), (1, 0.35)] {
            let beta = -((dim as f64) - 2.0 * s) / 2.0;
            let a = zero_order_constant(dim, s).unwrap();
            let c = power_symbol(beta, dim, s).unwrap();
            assert_relative_eq!(a, c, max_relative = 1e-14);
            assert!(a > 0.0);
        }
    }

    #[test]
    fn zero_order_closed_value() {
        // N=3, s=1/2: 4^s Γ²(1)/Γ²(1/2) = 2/π
        assert_relative_eq!(zero_order_constant(3, 0.5).unwrap(), 2.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn normalization_values() {
        // N=1, s=1/2: 4^s Γ(1) / (√π |Γ(-1/2)|) = 2/(√π 2√π) = 1/π
        assert_relative_eq!(fraclap_normalization(1, 0.5).unwrap(), 1.0 / PI, max_relative = 1e-13);
        for &(dim, s) in &[(1u32, 0.25), (2, 0.5), (3, 0.5), (3, 0.75), (4, 0.6), (5, 0.9)] {
            assert!(fraclap_normalization(dim, s).unwrap() > 0.0);
        }
    }

    #[test]
    fn critical_identity_exponent_values() {
        let p = FracHenonParams::new(3, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(critical_identity_exponent(&p, 3.0), 0.0, epsilon = 1e-13);
        let p0 = FracHenonParams::new(3, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(critical_identity_exponent(&p0, 1.5), 1.0, epsilon = 1e-13);
        let p2 = FracHenonParams::new(4, 0.75, 0.5).unwrap();
        assert_abs_diff_eq!(critical_identity_exponent(&p2, p2.p_star), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn params_invariants() {
        let p = FracHenonParams::new(3, 0.6, 1.0).unwrap();
        assert!(p.p_star > 1.0);
        assert!(p.beta > -p.n() + 2.0 * p.s && p.beta < 0.0);
        assert!(FracHenonParams::new(3, 0.5, -1.0).is_err()); // α ≤ -2s
        assert!(FracHenonParams::new(1, 0.7, 0.0).is_err()); // N ≤ 2s
    }

    #[test]
    fn spectral_constants_positive() {
        for &(dim, s) in &[(1u32, 0.3), (2, 0.45), (3, 0.5), (3, 0.75), (4, 0.6)] {
            let c = SpectralConstants::new(dim, s).unwrap();
            assert!(c.normalization > 0.0);
            assert!(c.zero_order > 0.0);
            assert!(c.kappa0 > 0.0);
            assert!(c.riesz > 0.0);
            assert!(c.sphere_n1 > 0.0);
        }
    }
}

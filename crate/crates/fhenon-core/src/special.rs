//! Gamma-function helpers on the full real line.
//!
//! `statrs` provides `ln_gamma` for positive arguments; negative arguments go
//! through the reflection formula, which is what the power symbol needs when
//! its denominator arguments land in (-1, 0).

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    statrs::function::gamma::ln_gamma(x)
}

/// (ln |Γ(x)|, sign of Γ(x)) for any non-pole x.
///
/// Returns a domain error at the poles x = 0, -1, -2, ...
pub fn ln_abs_gamma(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma(x), 1.0));
    }
    if x == x.floor() {
        return Err(Error::Domain(format!("gamma pole at x = {x}")));
    }
    // Γ(x) Γ(1-x) = π / sin(πx); for x < 1, 1-x > 0.
    let f = x.floor();
    let r = x - f; // in (0, 1)
    let sin_abs = (PI * r).sin(); // |sin(πx)|
    let sign = if (f as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let ln_abs = PI.ln() - sin_abs.ln() - ln_gamma(1.0 - x);
    Ok((ln_abs, sign))
}

/// Γ(x) on the full real line (non-pole).
pub fn gamma(x: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_abs_gamma(x)?;
    Ok(sign * ln_abs.exp())
}

/// ln B(a, b) for a, b > 0.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Surface measure of the unit d-sphere in R^{d+1}: |S^d| = 2 π^{(d+1)/2} / Γ((d+1)/2).
///
/// `sphere_surface(0) = 2` (two points), `sphere_surface(1) = 2π`,
/// `sphere_surface(2) = 4π`.
pub fn sphere_surface(d: u32) -> f64 {
    let half = (d as f64 + 1.0) / 2.0;
    2.0 * PI.powf(half) / ln_gamma(half).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_positive_values() {
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
    }

    #[test]
    fn gamma_negative_via_reflection() {
        // Γ(-1/2) = -2√π
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-13);
        // Γ(-3/2) = 4√π/3
        assert_relative_eq!(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0, max_relative = 1e-13);
        // recurrence Γ(x+1) = xΓ(x) at a generic negative x
        let x = -0.737;
        assert_relative_eq!(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn gamma_pole_is_error() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
    }

    #[test]
    fn sphere_surfaces() {
        assert_relative_eq!(sphere_surface(0), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(1), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(2), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(3), 2.0 * PI * PI, max_relative = 1e-14);
    }
}

//! Numerical realization of fast-decay radial solutions ("bubbles") of the
//! critical fractional Hénon equation
//!
//!   (-Δ)^s u = |x|^α u^{p*},   p* = (N + 2α + 2s)/(N - 2s),
//!
//! through the Emden-Fowler reduction to the autonomous 1D nonlocal equation
//! T v̄ + A v̄ = v̄^{p*} on the line, together with the machinery to map
//! profiles back to radial functions, evaluate the fractional Laplacian of
//! radial functions, and verify the decay laws, the power symbol, the Kelvin
//! transform identity, and the Riesz integral form.

pub mod error;
pub mod grid;
pub mod interp;
pub mod kernel;
pub mod operator;
pub mod params;
pub mod quad;
pub mod radial;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use grid::{Grid1D, Profile};
pub use kernel::{kernel_value, singularity_coefficient, tail_coefficient, KernelEval, KernelTable};
pub use operator::{exponential_identity_defect, exponential_profile, ReducedOperator};
pub use params::{
    classify_admissibility, critical_exponent, critical_identity_exponent, fraclap_normalization,
    power_symbol, zero_order_constant, AdmissibilityClass, FracHenonParams, SpectralConstants,
};
pub use radial::{
    decay_bounds, emden_fowler_forward, henon_residual, kelvin_identity_check, kelvin_transform,
    power_law_check, reconstruct_u, riesz_consistency, DecayReport, PowerLawCheck, RadialEvaluator,
    RadialFunction,
};
pub use solver::{
    alpha0_profile, decay_check, initial_guess, newton_solve, solve_bubble, SolveOptions,
    SolveReport,
};

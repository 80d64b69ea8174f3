use thiserror::Error;

/// Errors produced by the solver pipeline and its numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature budget exceeded ({evals} evaluations, error estimate {err:.3e})")]
    QuadratureBudget { evals: usize, err: f64 },

    #[error("quadrature produced a non-finite value on [{a:.6e}, {b:.6e}]")]
    QuadratureNonFinite { a: f64, b: f64 },

    #[error("extrapolation unstable: successive estimates differ by {rel:.3e} (limit {limit:.1e})")]
    ExtrapolationUnstable { rel: f64, limit: f64 },

    #[error("tail fit residual {residual:.3e} exceeds {limit:.1e}")]
    TailFit { residual: f64, limit: f64 },

    #[error("kernel table resolution {table:.4e} coarser than grid spacing {grid:.4e}")]
    Resolution { table: f64, grid: f64 },

    #[error("root finding failed: {0}")]
    RootFind(String),

    #[error("newton did not converge: {0}")]
    MaxIterExceeded(String),

    #[error("jacobian ill-conditioned: estimated condition number {cond:.3e} exceeds {limit:.1e}")]
    SingularJacobian { cond: f64, limit: f64 },

    #[error("converged profile is negative: min {min:.3e} against max {max:.3e}")]
    NegativeSolution { min: f64, max: f64 },

    #[error("admissibility: {0}")]
    Admissibility(String),

    #[error("decay window underflow: {0}")]
    WindowUnderflow(String),

    #[error("radius {r:.6e} outside the valid evaluation range [{lo:.6e}, {hi:.6e}]")]
    OutOfRange { r: f64, lo: f64, hi: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("continuation failed at alpha = {alpha}: {source}")]
    Continuation {
        alpha: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

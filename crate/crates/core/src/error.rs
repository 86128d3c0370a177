//! Error type shared by all numerical layers.

use thiserror::Error;

/// Errors reported by the numerical layers.
///
/// Messages carry the quantitative context (measured drift, residuals,
/// offending parameters) so that a failed run can be diagnosed from the
/// CLI output alone.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The truncated computational domain is too small for the requested
    /// parameter (eigenfunction mass would reach the artificial boundary).
    #[error("domain truncation unreliable: {0}")]
    DomainTruncation(String),

    /// An eigensolve did not converge or produced an inconsistent state.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    /// A 1D minimization bracket does not contain a single interior minimum.
    #[error("bracket does not isolate minimum: {0}")]
    BracketInvalid(String),

    /// Γ tracing is only implemented for z-symmetric surfaces.
    #[error("general Γ tracing unsupported: {0}")]
    UnsupportedSurface(String),

    /// The apparent contour is empty or could not be traced as a single
    /// closed curve.
    #[error("contour tracing failed: {0}")]
    ContourTracing(String),

    /// Two independent computations of the same geometric quantity disagree
    /// beyond tolerance.
    #[error("geometry inconsistency: {0}")]
    GeometryInconsistency(String),

    /// An ODE integration drifted beyond tolerance.
    #[error("integration drift too large: {0}")]
    IntegrationDrift(String),

    /// A quadrature did not converge between two refinements.
    #[error("quadrature non-convergence: {0}")]
    QuadratureNonconvergence(String),

    /// The band function's minimum is degenerate (Hessian not positive
    /// definite).
    #[error("degenerate band minimum: {0}")]
    DegenerateBandMinimum(String),

    /// A band evaluation fell outside the tabulated Montgomery range and the
    /// table could not be extended.
    #[error("band table range exceeded: {0}")]
    TableRange(String),

    /// The geometric hypotheses behind the eigenvalue expansion do not hold
    /// on this surface.
    #[error("expansion hypotheses violated: {0}")]
    AssumptionsViolated(String),

    /// Invalid input parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

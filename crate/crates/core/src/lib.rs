//! Semiclassical eigenvalue asymptotics for the Neumann magnetic Laplacian
//! on a smooth bounded domain in three dimensions, with constant field.
//!
//! For a constant magnetic field `B = e3`, the low-lying eigenvalues of the
//! magnetic Neumann Laplacian `(-ih∇ - A)²` concentrate near the apparent
//! contour `Γ` of the boundary — the curve where the field is tangent to
//! `∂Ω`. Their expansion in powers of `h^(1/3)` is driven by two classical
//! one-dimensional model operators and by geometric quantities along `Γ`:
//!
//! * the de Gennes operator `-∂_t² + (ξ-t)²` on the half-line (Neumann at 0),
//!   whose lowest eigenvalue curve has minimum `Θ₀` at `ξ₀`;
//! * the Montgomery operator `-∂_t² + (ξ - t²/2)²` on the line, with minimum
//!   `Θ₀^[2]` at `ξ₀^[2]`;
//! * the transverse curvature `β(s) = -∂_r n₃` along `Γ`, the field angle
//!   `φ(s)`, and the combinations `E(s) = α₀ sin²φ + cos²φ`,
//!   `K(s) = α₀^(1/3) β^(2/3) E^(1/3)`;
//! * the effective band `b^Γ(s,σ) = K(s) μ₁^[2](α₀^(1/3) σ / (E^(2/3) β^(1/3)))`
//!   whose harmonic approximation at its minimum yields the spectral gap.
//!
//! The crate is organised in four layers, each validated against an
//! independent direct discretization:
//!
//! * [`model_operators`] — 1D eigensolves, spectral-curve minimization,
//!   Hermite functions;
//! * [`surface_geometry`] — contour extraction, geodesic coordinates, and
//!   the geometric coefficients along `Γ`;
//! * [`reduced_operators`] — the band function, its minimizer and Hessian,
//!   a direct 1D reduced operator, and the ε-quantization of the band;
//! * [`asymptotics`] — assembled eigenvalue expansions, spectral gaps, and
//!   approximate eigenfunction profiles.
//!
//! Everything is deterministic: no randomness, no time-dependent state.

pub mod asymptotics;
pub mod error;
pub mod fourier;
pub mod model_operators;
pub mod optimize;
pub mod reduced_operators;
pub mod surface_geometry;
pub mod tridiag;

pub use error::{Error, Result};

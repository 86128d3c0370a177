//! The de Gennes and Montgomery model operators.
//!
//! Two one-dimensional Schrödinger operators control the boundary
//! spectral asymptotics:
//!
//! * de Gennes: `h_ξ = -∂_t² + (ξ-t)²` on `L²(ℝ₊)` with a Neumann condition
//!   at `t = 0`; its lowest eigenvalue curve `μ₁(ξ)` has a unique
//!   non-degenerate minimum `Θ₀ ∈ (0,1)` at `ξ₀ > 0`, and
//!   `α₀ = μ₁''(ξ₀)/2 > 0`.
//! * Montgomery: `h_ξ = -∂_t² + (ξ - t²/2)²` on `L²(ℝ)`; its lowest
//!   eigenvalue curve has a unique non-degenerate minimum `Θ₀^[2]` at
//!   `ξ₀^[2]`.
//!
//! Both are discretized with second-order central differences on a
//! truncated domain (ghost-point Neumann at 0 for the half-line, Dirichlet
//! at the artificial ends) and solved by Sturm bisection plus inverse
//! iteration. Reported constants are Richardson-extrapolated over the
//! resolutions (N, 2N). A Prüfer shooting solver provides an independent
//! route to `μ₁` for cross-checks.

use crate::error::{Error, Result};
use crate::optimize;
use crate::tridiag;
use serde::Serialize;

/// Which line the 1D model operator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// `[0, T]`, Neumann at 0 (ghost point), Dirichlet at `T`.
    HalfLine,
    /// `[-T, T]`, Dirichlet at both truncated ends.
    FullLine,
}

/// Boundary condition at one end of the truncated domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

/// Grid and boundary-condition description for a 1D eigenproblem.
#[derive(Debug, Clone, Copy)]
pub struct ModelOperatorDiscretization {
    pub domain_kind: DomainKind,
    /// Truncation radius `T` in dimensionless t-units.
    pub truncation_radius: f64,
    /// Resolution parameter: the half-line uses `num_points` unknowns with
    /// step `T/num_points`; the full line uses step `2T/num_points` with
    /// `num_points - 1` interior unknowns. Doubling `num_points` halves the
    /// step exactly, which is what Richardson extrapolation needs.
    pub num_points: usize,
    pub boundary_left: BoundaryCondition,
    pub boundary_right: BoundaryCondition,
}

impl ModelOperatorDiscretization {
    /// Default de Gennes discretization for Fourier parameter `xi`:
    /// `T = max(20, |ξ|+10)`, 4000 points, Neumann/Dirichlet.
    pub fn de_gennes_default(xi: f64) -> Self {
        Self {
            domain_kind: DomainKind::HalfLine,
            truncation_radius: 20.0f64.max(xi.abs() + 10.0),
            num_points: 4000,
            boundary_left: BoundaryCondition::Neumann,
            boundary_right: BoundaryCondition::Dirichlet,
        }
    }

    /// Default Montgomery discretization for Fourier parameter `xi`:
    /// `T = max(16, sqrt(2|ξ|)+8)`, 4000 points, Dirichlet/Dirichlet.
    pub fn montgomery_default(xi: f64) -> Self {
        Self {
            domain_kind: DomainKind::FullLine,
            truncation_radius: 16.0f64.max((2.0 * xi.abs()).sqrt() + 8.0),
            num_points: 4000,
            boundary_left: BoundaryCondition::Dirichlet,
            boundary_right: BoundaryCondition::Dirichlet,
        }
    }

    /// Same discretization with a different resolution.
    pub fn with_num_points(mut self, num_points: usize) -> Self {
        self.num_points = num_points;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.truncation_radius > 0.0) {
            return Err(Error::InvalidInput(
                "truncation_radius must be positive".into(),
            ));
        }
        if self.num_points < 3 {
            return Err(Error::InvalidInput("num_points must be at least 3".into()));
        }
        match self.domain_kind {
            DomainKind::HalfLine => {
                if self.boundary_left != BoundaryCondition::Neumann
                    || self.boundary_right != BoundaryCondition::Dirichlet
                {
                    return Err(Error::InvalidInput(
                        "half-line model uses Neumann at 0 and Dirichlet at T".into(),
                    ));
                }
            }
            DomainKind::FullLine => {
                if self.boundary_left != BoundaryCondition::Dirichlet
                    || self.boundary_right != BoundaryCondition::Dirichlet
                {
                    return Err(Error::InvalidInput(
                        "full-line model uses Dirichlet at both truncated ends".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One sample of a spectral curve: the lowest eigenvalue at Fourier
/// parameter `xi` together with the normalized, sign-definite ground state.
#[derive(Debug, Clone)]
pub struct SpectralCurveSample {
    pub xi: f64,
    pub mu1: f64,
    /// Grid nodes carrying the ground-state samples.
    pub grid: Vec<f64>,
    /// Ground state, L²-normalized in the discrete norm of
    /// [`SpectralCurveSample::discrete_l2_norm`], everywhere nonnegative.
    pub ground_state: Vec<f64>,
    /// Half-weight at the first node (half-line trapezoid rule).
    half_weight_first: bool,
    step: f64,
}

impl SpectralCurveSample {
    /// Discrete L² norm matching the quadrature weights of the ground state
    /// (trapezoid with a half weight at the Neumann node on the half-line,
    /// plain midpoint weights on the full line).
    pub fn discrete_l2_norm(&self) -> f64 {
        let mut sum = 0.0;
        for (i, u) in self.ground_state.iter().enumerate() {
            let w = if i == 0 && self.half_weight_first {
                0.5
            } else {
                1.0
            };
            sum += w * u * u;
        }
        (sum * self.step).sqrt()
    }

    /// Linear interpolation of the ground state; zero outside the grid.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.grid.len();
        if n == 0 || t < self.grid[0] || t > self.grid[n - 1] {
            return 0.0;
        }
        let pos = (t - self.grid[0]) / self.step;
        let i = (pos.floor() as usize).min(n - 2);
        let frac = pos - i as f64;
        self.ground_state[i] * (1.0 - frac) + self.ground_state[i + 1] * frac
    }
}

fn check_sample(sample: &SpectralCurveSample) -> Result<()> {
    if !(sample.mu1 > 0.0) {
        return Err(Error::Eigensolver(format!(
            "nonpositive lowest eigenvalue {} at xi={}",
            sample.mu1, sample.xi
        )));
    }
    if sample.ground_state.iter().any(|u| *u < -1e-10) {
        return Err(Error::Eigensolver(format!(
            "ground state changes sign at xi={}",
            sample.xi
        )));
    }
    let boundary = sample.ground_state.last().copied().unwrap_or(0.0).abs();
    if boundary > 1e-7 {
        return Err(Error::DomainTruncation(format!(
            "ground-state mass {boundary:.3e} at the artificial boundary (xi={})",
            sample.xi
        )));
    }
    Ok(())
}

/// Lowest eigenpair of the de Gennes operator `-∂_t² + (ξ-t)²` on
/// `[0, T]` with a ghost-point Neumann condition at 0.
///
/// The ghost point (symmetric reflection `u_{-1} = u_1`) is folded into the
/// matrix by a diagonal similarity that keeps it symmetric; the first
/// component is rescaled back when the ground state is reconstructed.
pub fn mu1_de_gennes(xi: f64, disc: &ModelOperatorDiscretization) -> Result<SpectralCurveSample> {
    disc.validate()?;
    if disc.domain_kind != DomainKind::HalfLine {
        return Err(Error::InvalidInput(
            "de Gennes operator requires a half-line discretization".into(),
        ));
    }
    if disc.truncation_radius < xi.abs() + 10.0 {
        return Err(Error::DomainTruncation(format!(
            "T = {} < |xi| + 10 = {}",
            disc.truncation_radius,
            xi.abs() + 10.0
        )));
    }
    let n = disc.num_points;
    let dt = disc.truncation_radius / n as f64;
    let inv2 = 1.0 / (dt * dt);
    let potential = |t: f64| {
        let w = xi - t;
        w * w
    };
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n {
        let t = i as f64 * dt;
        diag.push(2.0 * inv2 + potential(t));
        if i + 1 < n {
            off.push(if i == 0 {
                -std::f64::consts::SQRT_2 * inv2
            } else {
                -inv2
            });
        }
    }
    let (mu1, mut v) = tridiag::lowest_eigenpair(&diag, &off)?;
    // Undo the symmetrizing similarity (first component was scaled by 1/√2)
    // and normalize in the trapezoid norm, which is plain ℓ² for v.
    v[0] *= std::f64::consts::SQRT_2;
    let scale = 1.0 / dt.sqrt();
    for u in v.iter_mut() {
        *u *= scale;
    }
    let grid = (0..n).map(|i| i as f64 * dt).collect();
    let sample = SpectralCurveSample {
        xi,
        mu1,
        grid,
        ground_state: v,
        half_weight_first: true,
        step: dt,
    };
    check_sample(&sample)?;
    Ok(sample)
}

/// Lowest eigenpair of the Montgomery operator `-∂_t² + (ξ - t²/2)²` on
/// `[-T, T]` with Dirichlet truncation.
pub fn mu1_montgomery(xi: f64, disc: &ModelOperatorDiscretization) -> Result<SpectralCurveSample> {
    disc.validate()?;
    if disc.domain_kind != DomainKind::FullLine {
        return Err(Error::InvalidInput(
            "Montgomery operator requires a full-line discretization".into(),
        ));
    }
    if disc.truncation_radius < (2.0 * xi.abs()).sqrt() + 8.0 {
        return Err(Error::DomainTruncation(format!(
            "T = {} < sqrt(2|xi|) + 8 = {}",
            disc.truncation_radius,
            (2.0 * xi.abs()).sqrt() + 8.0
        )));
    }
    let t_max = disc.truncation_radius;
    let n_interior = disc.num_points - 1;
    let dt = 2.0 * t_max / disc.num_points as f64;
    let inv2 = 1.0 / (dt * dt);
    let mut diag = Vec::with_capacity(n_interior);
    let mut grid = Vec::with_capacity(n_interior);
    for i in 1..disc.num_points {
        let t = -t_max + i as f64 * dt;
        let w = xi - 0.5 * t * t;
        diag.push(2.0 * inv2 + w * w);
        grid.push(t);
    }
    let off = vec![-inv2; n_interior - 1];
    let (mu1, mut v) = tridiag::lowest_eigenpair(&diag, &off)?;
    let scale = 1.0 / dt.sqrt();
    for u in v.iter_mut() {
        *u *= scale;
    }
    let sample = SpectralCurveSample {
        xi,
        mu1,
        grid,
        ground_state: v,
        half_weight_first: false,
        step: dt,
    };
    check_sample(&sample)?;
    Ok(sample)
}

/// Richardson-extrapolated de Gennes eigenvalue over resolutions (N, 2N).
pub fn mu1_de_gennes_extrapolated(xi: f64, disc: &ModelOperatorDiscretization) -> Result<f64> {
    let coarse = mu1_de_gennes(xi, disc)?.mu1;
    let fine = mu1_de_gennes(xi, &disc.with_num_points(2 * disc.num_points))?.mu1;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Richardson-extrapolated Montgomery eigenvalue over resolutions (N, 2N).
pub fn mu1_montgomery_extrapolated(xi: f64, disc: &ModelOperatorDiscretization) -> Result<f64> {
    let coarse = mu1_montgomery(xi, disc)?.mu1;
    let fine = mu1_montgomery(xi, &disc.with_num_points(2 * disc.num_points))?.mu1;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Independent de Gennes eigenvalue via Prüfer shooting.
///
/// In the Prüfer angle `θ` (with `u = ρ sin θ`, `u' = ρ cos θ`), the
/// Neumann condition is `θ(0) = π/2` and the Dirichlet mismatch at `T`
/// vanishes for the ground state when `θ(T) = π`. The angle at `T` is
/// strictly increasing in `λ`, so bisection on `θ(T;λ) - π` is robust and
/// never over- or under-flows the way raw shooting of `u` would.
pub fn mu1_de_gennes_shooting(xi: f64, t_max: f64, step: f64) -> Result<f64> {
    if !(t_max > xi.abs() + 6.0) {
        return Err(Error::DomainTruncation(format!(
            "shooting domain T = {t_max} too small for xi = {xi}"
        )));
    }
    let potential = |t: f64| {
        let w = xi - t;
        w * w
    };
    let theta_end = |lambda: f64| -> f64 {
        let n_steps = (t_max / step).ceil() as usize;
        let h = t_max / n_steps as f64;
        let rhs = |t: f64, theta: f64| {
            let c = theta.cos();
            let s = theta.sin();
            c * c + (lambda - potential(t)) * s * s
        };
        let mut theta = 0.5 * std::f64::consts::PI;
        let mut t = 0.0;
        for _ in 0..n_steps {
            let k1 = rhs(t, theta);
            let k2 = rhs(t + 0.5 * h, theta + 0.5 * h * k1);
            let k3 = rhs(t + 0.5 * h, theta + 0.5 * h * k2);
            let k4 = rhs(t + h, theta + h * k3);
            theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        theta
    };
    let target = std::f64::consts::PI;
    let mut lo = 0.0;
    let mut hi = 2.0f64.max(xi * xi + 2.0);
    if theta_end(lo) >= target || theta_end(hi) <= target {
        return Err(Error::Eigensolver(format!(
            "shooting bracket [{lo}, {hi}] does not straddle the ground state at xi={xi}"
        )));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-14 * mid.max(1.0) {
            break;
        }
        if theta_end(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Outcome of minimizing a spectral curve.
#[derive(Debug, Clone, Copy)]
pub struct SpectralCurveMinimum {
    pub xi_star: f64,
    pub mu_star: f64,
    /// Second derivative of the curve at the minimum (not halved).
    pub second_derivative: f64,
}

/// Minimize a spectral curve on a bracket.
///
/// Brent refinement to tolerance `tol` in ξ, a deterministic Newton polish
/// of the stationarity condition, and a Richardson-refined central second
/// derivative. Errors if the bracket does not isolate an interior minimum
/// or if the curvature at the minimum is not positive.
pub fn minimize_spectral_curve<F: FnMut(f64) -> Result<f64>>(
    mut curve: F,
    bracket: (f64, f64),
    tol: f64,
) -> Result<SpectralCurveMinimum> {
    let (x_brent, _) = optimize::brent_minimize(&mut curve, bracket, tol)?;
    // Derivative steps balance FD truncation against the ~1e-13 rounding
    // noise of the extrapolated eigenvalue curves; sqrt(tol) would be far
    // too small for stable curvature estimates.
    let h_polish = 2e-3f64.max(tol.sqrt());
    let xi_star = optimize::polish_stationary(&mut curve, x_brent, h_polish, 4)?;
    let mu_star = curve(xi_star)?;
    let h_curv = 0.02f64;
    let second_derivative = optimize::second_derivative(&mut curve, xi_star, h_curv)?;
    if !(second_derivative > 0.0) {
        return Err(Error::BracketInvalid(format!(
            "curvature {second_derivative:.3e} at located minimum {xi_star} is not positive"
        )));
    }
    Ok(SpectralCurveMinimum {
        xi_star,
        mu_star,
        second_derivative,
    })
}

/// The model constants extracted from the two spectral curves.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelConstants {
    /// `Θ₀ = min μ₁ (de Gennes)`.
    pub theta0: f64,
    /// Minimizer `ξ₀` of the de Gennes curve.
    pub xi0: f64,
    /// `α₀ = μ₁''(ξ₀)/2`.
    pub alpha0: f64,
    /// `Θ₀^[2] = min μ₁^[2] (Montgomery)`.
    pub theta0_m2: f64,
    /// Minimizer `ξ₀^[2]` of the Montgomery curve.
    pub xi0_m2: f64,
    /// `(μ₁^[2])''(ξ₀^[2])` (not halved).
    pub curv_m2: f64,
}

/// Bracket known to isolate the de Gennes minimum.
pub const DE_GENNES_BRACKET: (f64, f64) = (0.2, 1.5);
/// Bracket known to isolate the Montgomery minimum.
pub const MONTGOMERY_BRACKET: (f64, f64) = (0.05, 1.0);

/// Compute all six model constants by minimizing the two Richardson-
/// extrapolated spectral curves.
pub fn model_constants(
    disc_dg: &ModelOperatorDiscretization,
    disc_m: &ModelOperatorDiscretization,
    tol: f64,
) -> Result<ModelConstants> {
    let dg = minimize_spectral_curve(
        |xi| mu1_de_gennes_extrapolated(xi, disc_dg),
        DE_GENNES_BRACKET,
        tol,
    )?;
    let m = minimize_spectral_curve(
        |xi| mu1_montgomery_extrapolated(xi, disc_m),
        MONTGOMERY_BRACKET,
        tol,
    )?;
    let consts = ModelConstants {
        theta0: dg.mu_star,
        xi0: dg.xi_star,
        alpha0: 0.5 * dg.second_derivative,
        theta0_m2: m.mu_star,
        xi0_m2: m.xi_star,
        curv_m2: m.second_derivative,
    };
    if !(consts.theta0 > 0.0 && consts.theta0 < 1.0) {
        return Err(Error::Eigensolver(format!(
            "Θ₀ = {} outside (0,1)",
            consts.theta0
        )));
    }
    if !(consts.xi0 > 0.0 && consts.alpha0 > 0.0 && consts.curv_m2 > 0.0) {
        return Err(Error::Eigensolver(
            "model-constant positivity violated".into(),
        ));
    }
    Ok(consts)
}

/// Default model constants: 4000-point discretizations, ξ-tolerance 1e-10.
pub fn default_model_constants() -> Result<ModelConstants> {
    model_constants(
        &ModelOperatorDiscretization::de_gennes_default(1.0),
        &ModelOperatorDiscretization::montgomery_default(1.0),
        1e-10,
    )
}

/// Maximum Hermite index supported by the normalized recurrence.
pub const HERMITE_MAX_ORDER: usize = 50;

/// L²(ℝ)-normalized Hermite function `h_n(x)`.
///
/// Uses the three-term recurrence directly on the normalized functions
/// `h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}`, which is stable
/// for moderate orders (the classical polynomial recurrence overflows).
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "Hermite order {n} exceeds the recurrence stability bound {HERMITE_MAX_ORDER}"
        )));
    }
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return Ok(h0);
    }
    let mut prev = h0;
    let mut curr = std::f64::consts::SQRT_2 * x * h0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * curr - (kf / (kf + 1.0)).sqrt() * prev;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

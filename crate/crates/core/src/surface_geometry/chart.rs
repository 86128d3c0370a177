//! Geodesic extension of the contour frame.
//!
//! Each contour point is pushed by the intrinsic geodesic flow of `∂Ω`:
//! `∂²_r γ = -K(∂_rγ, ∂_rγ) n(γ)` with `K` the second fundamental form of
//! the Weingarten map, starting from `γ(0,s)` on Γ with unit transverse
//! velocity. The flow conserves `|∂_rγ| = 1` and `⟨∂_rγ, ∂_sγ⟩ = 0`; both
//! are monitored, not enforced, so the drift diagnostics measure the real
//! integration quality.

use super::{GammaFrame, Surface};
use crate::error::{Error, Result};
use crate::fourier;
use nalgebra::Vector3;

const E3: Vector3<f64> = Vector3::new(0.0, 0.0, 1.0);

/// Drift diagnostics of a geodesic chart integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChartDrift {
    /// max |1 - |∂_rγ|| over all nodes.
    pub speed: f64,
    /// max |⟨∂_rγ, n⟩| over all nodes.
    pub tangency: f64,
    /// max |F(γ)| / |∇F(γ)| (distance-like surface residual).
    pub surface: f64,
}

/// Geodesic coordinates around Γ: grids in `(r, s)`, node positions and
/// velocities, the tangential metric coefficient `α = |∂_sγ|²`, and the
/// field components `𝓑` in the moving frame on `{t = 0}`.
#[derive(Debug, Clone)]
pub struct GeodesicChart {
    /// Uniform, symmetric r-grid containing 0.
    pub r_grid: Vec<f64>,
    /// The frame's arc-length samples (period `2L`).
    pub s_grid: Vec<f64>,
    /// Positions `γ(r, s)`, indexed `[i_r][j_s]`.
    pub gamma: Vec<Vec<Vector3<f64>>>,
    /// Velocities `∂_rγ(r, s)`.
    pub dr_gamma: Vec<Vec<Vector3<f64>>>,
    /// Tangents `∂_sγ(r, s)` (spectral derivative along rows).
    pub ds_gamma: Vec<Vec<Vector3<f64>>>,
    /// Outward normals at the nodes.
    pub normal: Vec<Vec<Vector3<f64>>>,
    /// Metric coefficient `α(r, s) = |∂_sγ|²`.
    pub alpha: Vec<Vec<f64>>,
    /// Field components in the frame: `e₃ = 𝓑₁∂_rγ + 𝓑₂∂_sγ - 𝓑₃n`.
    pub b1: Vec<Vec<f64>>,
    pub b2: Vec<Vec<f64>>,
    pub b3: Vec<Vec<f64>>,
    /// Contour length period `2L` (for spectral derivatives in s).
    pub period: f64,
    pub drift: ChartDrift,
}

impl GeodesicChart {
    /// Index of `r = 0` in the r-grid.
    pub fn center_index(&self) -> usize {
        self.r_grid.len() / 2
    }

    /// Uniform r-spacing.
    pub fn r_step(&self) -> f64 {
        self.r_grid[1] - self.r_grid[0]
    }
}

/// One RK4 step of the geodesic equation.
fn rk4_step(
    surface: &Surface,
    pos: Vector3<f64>,
    vel: Vector3<f64>,
    h: f64,
) -> (Vector3<f64>, Vector3<f64>) {
    let acc = |p: &Vector3<f64>, v: &Vector3<f64>| -> Vector3<f64> {
        let n = surface.normal(p);
        let k = surface.weingarten(p, v).dot(v);
        -k * n
    };
    let k1p = vel;
    let k1v = acc(&pos, &vel);
    let k2p = vel + 0.5 * h * k1v;
    let k2v = acc(&(pos + 0.5 * h * k1p), &k2p);
    let k3p = vel + 0.5 * h * k2v;
    let k3v = acc(&(pos + 0.5 * h * k2p), &k3p);
    let k4p = vel + h * k3v;
    let k4v = acc(&(pos + h * k3p), &k4p);
    let new_pos = pos + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    let new_vel = vel + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    (new_pos, new_vel)
}

/// Integrate one geodesic ray from a frame sample out to `r_target`,
/// recording every step. Positions are projected back to the surface and
/// velocities re-tangentialized after each step; the speed is *not*
/// renormalized, so its drift is a genuine integration diagnostic.
fn integrate_ray(
    surface: &Surface,
    start_pos: Vector3<f64>,
    start_vel: Vector3<f64>,
    r_target: f64,
    steps: usize,
) -> Vec<(Vector3<f64>, Vector3<f64>)> {
    let h = r_target / steps as f64;
    let mut out = Vec::with_capacity(steps);
    let mut pos = start_pos;
    let mut vel = start_vel;
    for _ in 0..steps {
        let (p, v) = rk4_step(surface, pos, vel, h);
        pos = surface.project(&p);
        let n = surface.normal(&pos);
        vel = v - n * n.dot(&v);
        out.push((pos, vel));
    }
    out
}

/// Push the contour frame by the geodesic flow to build a chart on
/// `[-r_max, r_max] × Γ` with `steps` RK4 steps each side of Γ.
///
/// Errors if the measured drift exceeds the advertised tolerances
/// (on-surface 1e-10, tangency 1e-8, unit speed 1e-9 per unit r).
pub fn geodesic_extend(
    surface: &Surface,
    frame: &GammaFrame,
    r_max: f64,
    steps: usize,
) -> Result<GeodesicChart> {
    if !(r_max > 0.0) || steps == 0 {
        return Err(Error::InvalidInput(format!(
            "geodesic chart needs r_max > 0 and steps > 0, got ({r_max}, {steps})"
        )));
    }
    let ns = frame.num_samples();
    let nr = 2 * steps + 1;
    let center = steps;
    let mut gamma = vec![vec![Vector3::zeros(); ns]; nr];
    let mut dr_gamma = vec![vec![Vector3::zeros(); ns]; nr];

    for (j, sample) in frame.samples.iter().enumerate() {
        gamma[center][j] = sample.gamma;
        dr_gamma[center][j] = sample.dr_gamma;
        let forward = integrate_ray(surface, sample.gamma, sample.dr_gamma, r_max, steps);
        for (k, (p, v)) in forward.into_iter().enumerate() {
            gamma[center + 1 + k][j] = p;
            dr_gamma[center + 1 + k][j] = v;
        }
        let backward = integrate_ray(surface, sample.gamma, sample.dr_gamma, -r_max, steps);
        for (k, (p, v)) in backward.into_iter().enumerate() {
            gamma[center - 1 - k][j] = p;
            dr_gamma[center - 1 - k][j] = v;
        }
    }

    let r_grid: Vec<f64> = (0..nr)
        .map(|i| (i as f64 - center as f64) * (r_max / steps as f64))
        .collect();
    let s_grid: Vec<f64> = frame.samples.iter().map(|s| s.s).collect();
    let period = frame.total_length();

    // Tangential derivatives, metric, frame components and drift.
    let mut ds_gamma = vec![vec![Vector3::zeros(); ns]; nr];
    let mut normal = vec![vec![Vector3::zeros(); ns]; nr];
    let mut alpha = vec![vec![0.0; ns]; nr];
    let mut b1 = vec![vec![0.0; ns]; nr];
    let mut b2 = vec![vec![0.0; ns]; nr];
    let mut b3 = vec![vec![0.0; ns]; nr];
    let mut drift = ChartDrift::default();

    for i in 0..nr {
        // Spectral derivative of each Cartesian component along the row.
        let mut deriv = [vec![], vec![], vec![]];
        for comp in 0..3 {
            let row: Vec<f64> = (0..ns).map(|j| gamma[i][j][comp]).collect();
            deriv[comp] = fourier::periodic_derivative(&row, period);
        }
        for j in 0..ns {
            let t = Vector3::new(deriv[0][j], deriv[1][j], deriv[2][j]);
            ds_gamma[i][j] = t;
            let a = t.norm_squared();
            alpha[i][j] = a;
            let p = gamma[i][j];
            let n = surface.normal(&p);
            normal[i][j] = n;
            let v = dr_gamma[i][j];
            b1[i][j] = E3.dot(&v);
            b2[i][j] = E3.dot(&t) / a;
            b3[i][j] = -n.z;

            drift.speed = drift.speed.max((v.norm() - 1.0).abs());
            drift.tangency = drift.tangency.max(n.dot(&v).abs());
            let g = surface.gradient(&p);
            drift.surface = drift
                .surface
                .max((surface.value(&p) / g.norm().max(1e-300)).abs());
        }
    }

    let speed_tol = 1e-9 * (1.0 + r_max);
    if drift.surface > 1e-10 || drift.tangency > 1e-8 || drift.speed > speed_tol {
        return Err(Error::IntegrationDrift(format!(
            "geodesic chart drift: surface {:.3e} (tol 1e-10), tangency {:.3e} (tol 1e-8), \
             speed {:.3e} (tol {:.1e}); increase steps",
            drift.surface, drift.tangency, drift.speed, speed_tol
        )));
    }

    Ok(GeodesicChart {
        r_grid,
        s_grid,
        gamma,
        dr_gamma,
        ds_gamma,
        normal,
        alpha,
        b1,
        b2,
        b3,
        period,
        drift,
    })
}

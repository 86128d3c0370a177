//! Completion of the contour frame: curvatures, field angle combinations,
//! hypothesis checks, and the algebraic cancellation of the gauged vector
//! potential's Taylor coefficients.

use super::{chart, contour, GammaFrame, Surface};
use crate::error::{Error, Result};
use crate::fourier;
use crate::model_operators::ModelConstants;
use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

const E3: Vector3<f64> = Vector3::new(0.0, 0.0, 1.0);

/// r-step of the finite-difference stencils transverse to Γ.
const R_STENCIL: f64 = 1e-3;
/// t-step of the stencils into the tube (toward the interior).
const T_STENCIL: f64 = 1e-4;

/// Complete arc-length frame along Γ.
///
/// Beyond the positions and tangents of [`contour::extract_gamma`], this
/// computes at every sample:
///
/// * `β = -∂_r n₃`, twice — by finite differences of `n₃` along the
///   geodesic rays, and through the Weingarten map as `-⟨dn(∂_rγ), e₃⟩` —
///   requiring agreement within 1e-5;
/// * `κ_g`, twice — from the chart metric via `∂_rα(0,s) = -2κ_g` and from
///   the Frenet decomposition `κ_g = -⟨∂²_sγ, ∂_rγ⟩` — same tolerance;
/// * `E(s) = α₀ sin²φ + cos²φ` and `K(s) = α₀^(1/3) β^(2/3) E^(1/3)` using
///   `α₀` from the supplied model constants.
pub fn gamma_frame(
    surface: &Surface,
    num_samples: usize,
    consts: &ModelConstants,
) -> Result<GammaFrame> {
    let mut frame = contour::extract_gamma(surface, num_samples)?;
    let stencil = chart::geodesic_extend(surface, &frame, 2.0 * R_STENCIL, 2)?;
    debug_assert_eq!(stencil.r_grid.len(), 5);
    let h = stencil.r_step();
    let ns = frame.num_samples();

    // Frenet route to the geodesic curvature: ∂²_sγ = -κ_g ∂_sγ×n + κ_n n,
    // and ∂_sγ×n = ∂_rγ for the direct frame.
    let period = frame.total_length();
    let mut d2: [Vec<f64>; 3] = [vec![], vec![], vec![]];
    for comp in 0..3 {
        let row: Vec<f64> = frame.samples.iter().map(|s| s.gamma[comp]).collect();
        let d1 = fourier::periodic_derivative(&row, period);
        d2[comp] = fourier::periodic_derivative(&d1, period);
    }

    let alpha0 = consts.alpha0;
    for j in 0..ns {
        let sample = &mut frame.samples[j];

        // β by 5-point finite differences of n₃ along the ray.
        let n3 = |i: usize| stencil.normal[i][j].z;
        let dn3_dr = (n3(0) - 8.0 * n3(1) + 8.0 * n3(3) - n3(4)) / (12.0 * h);
        let beta_fd = -dn3_dr;
        // β via the Weingarten map.
        let beta_w = -surface
            .weingarten(&sample.gamma, &sample.dr_gamma)
            .dot(&E3);
        if (beta_fd - beta_w).abs() > 1e-5 * beta_w.abs().max(1.0) {
            return Err(Error::GeometryInconsistency(format!(
                "β at s = {}: finite differences {beta_fd} vs Weingarten {beta_w}",
                sample.s
            )));
        }
        if !(beta_w > 0.0) {
            return Err(Error::GeometryInconsistency(format!(
                "β = {beta_w} is not positive at s = {} (orientation or geometry broken)",
                sample.s
            )));
        }

        // κ_g from the chart metric: ∂_rα(0,s) = -2 κ_g.
        let al = |i: usize| stencil.alpha[i][j];
        let dalpha_dr = (al(0) - 8.0 * al(1) + 8.0 * al(3) - al(4)) / (12.0 * h);
        let kappa_chart = -0.5 * dalpha_dr;
        // κ_g from the Frenet decomposition.
        let dd = Vector3::new(d2[0][j], d2[1][j], d2[2][j]);
        let kappa_frenet = -dd.dot(&sample.dr_gamma);
        if (kappa_chart - kappa_frenet).abs() > 1e-5 {
            return Err(Error::GeometryInconsistency(format!(
                "κ_g at s = {}: chart metric {kappa_chart} vs Frenet {kappa_frenet}",
                sample.s
            )));
        }

        sample.beta = beta_w;
        sample.kappa_g = kappa_frenet;
        let (sin_phi, cos_phi) = (sample.phi.sin(), sample.phi.cos());
        sample.e_coeff = alpha0 * sin_phi * sin_phi + cos_phi * cos_phi;
        sample.k_coeff = alpha0.cbrt() * sample.beta.powf(2.0 / 3.0) * sample.e_coeff.cbrt();
    }
    frame.alpha0 = Some(alpha0);
    Ok(frame)
}

/// Report on the geometric hypotheses behind the eigenvalue expansion.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionsReport {
    /// `n₃` vanishes linearly on Γ: `min β` is positive with margin.
    pub linear_vanishing: bool,
    /// `K` has a unique non-degenerate minimum on the sampled contour.
    pub k_unique_nondegenerate_min: bool,
    /// Parabolic-refined location of the (first) global minimum of `K`.
    pub s_min: f64,
    /// Refined minimal value of `K`.
    pub k_min: f64,
    /// Discrete second derivative of `K` at the minimum.
    pub k_second_derivative: f64,
    /// Number of sampled local minima matching the global value.
    pub num_global_minima: usize,
    /// Gap between the best and second-best distinct local minima
    /// (0 when they tie, infinite when there is no second one).
    pub second_minimum_margin: f64,
}

/// Check the expansion hypotheses on a completed frame.
pub fn verify_assumptions(frame: &GammaFrame) -> Result<AssumptionsReport> {
    if !frame.is_complete() {
        return Err(Error::InvalidInput(
            "verify_assumptions needs a completed frame".into(),
        ));
    }
    let n = frame.num_samples();
    let betas: Vec<f64> = frame.samples.iter().map(|s| s.beta).collect();
    let ks: Vec<f64> = frame.samples.iter().map(|s| s.k_coeff).collect();
    let beta_min = betas.iter().cloned().fold(f64::INFINITY, f64::min);
    let beta_max = betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let linear_vanishing = beta_min > 1e-8 * beta_max.max(1.0);

    // Local minima on the periodic sample set.
    let ds = frame.spacing();
    let mut local_minima: Vec<(usize, f64, f64, f64)> = Vec::new(); // (index, s_refined, k_refined, d2)
    for j in 0..n {
        let km = ks[(j + n - 1) % n];
        let k0 = ks[j];
        let kp = ks[(j + 1) % n];
        if k0 <= km && k0 <= kp && (k0 < km || k0 < kp) {
            // Parabolic refinement through the three periodic neighbors.
            let denom = km - 2.0 * k0 + kp;
            let (offset, kref) = if denom.abs() > 1e-300 {
                let x = 0.5 * (km - kp) / denom;
                (x, k0 - 0.25 * (km - kp) * x)
            } else {
                (0.0, k0)
            };
            let d2 = denom / (ds * ds);
            let s_ref = (frame.samples[j].s + offset * ds).rem_euclid(frame.total_length());
            local_minima.push((j, s_ref, kref, d2));
        }
    }
    if local_minima.is_empty() {
        // Constant K: every sample ties; report the first as the minimum.
        return Ok(AssumptionsReport {
            linear_vanishing,
            k_unique_nondegenerate_min: false,
            s_min: 0.0,
            k_min: ks[0],
            k_second_derivative: 0.0,
            num_global_minima: n,
            second_minimum_margin: 0.0,
        });
    }
    local_minima.sort_by(|a, b| a.2.total_cmp(&b.2));
    let (_, s_min, k_min, d2_min) = local_minima[0];
    let k_scale = ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(1e-30);
    let tie_tol = 1e-9 * k_scale;
    let num_global = local_minima.iter().filter(|m| m.2 - k_min <= tie_tol).count();
    let second_margin = if local_minima.len() > 1 {
        local_minima[1].2 - k_min
    } else {
        f64::INFINITY
    };
    let nondegenerate = d2_min > 1e-8 * k_scale;
    Ok(AssumptionsReport {
        linear_vanishing,
        k_unique_nondegenerate_min: nondegenerate && num_global == 1,
        s_min,
        k_min,
        k_second_derivative: d2_min,
        num_global_minima: num_global,
        second_minimum_margin: second_margin,
    })
}

/// The tubular chart `Φ(r,s,t) = γ(r,s) - t n(γ(r,s))` at a contour point:
/// metric determinant and frame components of `e₃` at depth `t`.
fn tube_quantities(
    surface: &Surface,
    gamma: &Vector3<f64>,
    dr_gamma: &Vector3<f64>,
    ds_gamma: &Vector3<f64>,
    t: f64,
) -> (f64, Vector3<f64>) {
    let n = surface.normal(gamma);
    let a1 = dr_gamma - t * surface.weingarten(gamma, dr_gamma);
    let a2 = ds_gamma - t * surface.weingarten(gamma, ds_gamma);
    let g11 = a1.norm_squared();
    let g12 = a1.dot(&a2);
    let g22 = a2.norm_squared();
    let det_sqrt = (g11 * g22 - g12 * g12).sqrt();
    // Solve dΦ · 𝓑 = e₃ with dΦ = [a1, a2, -n].
    let m = Matrix3::from_columns(&[a1, a2, -n]);
    let b = m
        .lu()
        .solve(&E3)
        .unwrap_or_else(|| Vector3::new(f64::NAN, f64::NAN, f64::NAN));
    (det_sqrt, b)
}

/// `∂_t |g|^(1/2)(0, s, 0)` into the tube, which equals `-tr dn = -2H`
/// (twice the mean curvature with the outward normal). Exposed as a
/// diagnostic so the tube machinery can be checked against closed-form
/// curvatures.
pub fn tube_area_derivative(surface: &Surface, frame: &GammaFrame, j: usize) -> f64 {
    let s = &frame.samples[j];
    let f = |t: f64| tube_quantities(surface, &s.gamma, &s.dr_gamma, &s.ds_gamma, t).0;
    let h = T_STENCIL;
    (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
}

/// Ingredients of the algebraic cancellation at one contour sample.
///
/// `u₁ = ∂_r[|g|^(1/2) 𝓑₂]` and `u₂ = ∂_s[|g|^(1/2) 𝓑₂] + ∂_t[|g|^(1/2) 𝓑₃]`
/// are the leading mixed Taylor coefficients of the gauged vector
/// potential; the combination
/// `-2u₂ cos φ + 2u₁ sin φ + cos²φ ∂_r(α⁻¹)`
/// vanishes identically on Γ as a consequence of the frame normalization
/// `𝓑₁² + α𝓑₂² + 𝓑₃² = 1`. Here `cos φ`, `sin φ` are the raw frame
/// components `𝓑₁(0,s,0)`, `𝓑₂(0,s,0)` of the field.
#[derive(Debug, Clone, Copy)]
pub struct CancellationBreakdown {
    pub u1: f64,
    pub u2: f64,
    pub dr_alpha_inv: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    pub residual: f64,
}

/// Compute the cancellation ingredients at sample index `j` of a chart.
///
/// The chart must hold a uniform 5-point r-stencil centered at `r = 0`
/// (`geodesic_extend(surface, frame, 2h, 2)` produces exactly that); the
/// `∂_t` terms are evaluated through the tubular map with a `1e-4` stencil.
pub fn cancellation_breakdown(
    surface: &Surface,
    chart: &chart::GeodesicChart,
    j: usize,
) -> Result<CancellationBreakdown> {
    let nr = chart.r_grid.len();
    if nr < 5 {
        return Err(Error::InvalidInput(format!(
            "cancellation stencil needs at least 5 r-nodes, chart has {nr}"
        )));
    }
    let c = chart.center_index();
    if chart.r_grid[c].abs() > 1e-14 {
        return Err(Error::InvalidInput(
            "chart r-grid is not centered at 0".into(),
        ));
    }
    if j >= chart.s_grid.len() {
        return Err(Error::InvalidInput(format!(
            "sample index {j} out of range"
        )));
    }
    let h = chart.r_step();
    let ns = chart.s_grid.len();

    // |g|^(1/2) 𝓑₂ on the five central rows (t = 0), honest 2×2 metric.
    let w = |i: usize, j: usize| -> f64 {
        let g11 = chart.dr_gamma[i][j].norm_squared();
        let g12 = chart.dr_gamma[i][j].dot(&chart.ds_gamma[i][j]);
        let g22 = chart.alpha[i][j];
        (g11 * g22 - g12 * g12).sqrt() * chart.b2[i][j]
    };
    let u1 = (w(c - 2, j) - 8.0 * w(c - 1, j) + 8.0 * w(c + 1, j) - w(c + 2, j)) / (12.0 * h);

    // ∂_s part of u₂: spectral derivative of |g|^(1/2) 𝓑₂ along the r = 0 row.
    let row: Vec<f64> = (0..ns).map(|jj| w(c, jj)).collect();
    let ds_part = fourier::periodic_derivative(&row, chart.period)[j];

    // ∂_t part of u₂ through the tubular map.
    let g0 = chart.gamma[c][j];
    let dr0 = chart.dr_gamma[c][j];
    let ds0 = chart.ds_gamma[c][j];
    let tt = |t: f64| {
        let (det_sqrt, b) = tube_quantities(surface, &g0, &dr0, &ds0, t);
        det_sqrt * b.z
    };
    let ht = T_STENCIL;
    let dt_part =
        (tt(-2.0 * ht) - 8.0 * tt(-ht) + 8.0 * tt(ht) - tt(2.0 * ht)) / (12.0 * ht);
    let u2 = ds_part + dt_part;

    // ∂_r (α⁻¹) on the stencil.
    let ai = |i: usize| 1.0 / chart.alpha[i][j];
    let dr_alpha_inv =
        (ai(c - 2) - 8.0 * ai(c - 1) + 8.0 * ai(c + 1) - ai(c + 2)) / (12.0 * h);

    // Raw frame components of the field on Γ.
    let cos_phi = chart.b1[c][j];
    let sin_phi = chart.b2[c][j] * chart.alpha[c][j];

    let residual =
        (-2.0 * u2 * cos_phi + 2.0 * u1 * sin_phi + cos_phi * cos_phi * dr_alpha_inv).abs();
    Ok(CancellationBreakdown {
        u1,
        u2,
        dr_alpha_inv,
        cos_phi,
        sin_phi,
        residual,
    })
}

/// Absolute residual of the algebraic cancellation at arc length `s`
/// (nearest sample of the chart's s-grid).
pub fn cancellation_residual(
    surface: &Surface,
    chart: &chart::GeodesicChart,
    s: f64,
) -> Result<f64> {
    let ns = chart.s_grid.len();
    let ds = chart.period / ns as f64;
    let j = ((s / ds).round() as usize) % ns;
    Ok(cancellation_breakdown(surface, chart, j)?.residual)
}

//! Mean circulation of the vector potential along Γ.
//!
//! By the Ostrogradski–Stokes formula, the gauge-invariant mean of the
//! tangential potential along the contour equals the flux of the field
//! through the upper boundary divided by the contour length:
//! `⟨f⟩ = (1/|Γ|) ∫_{∂Ω⁺} n₃ dS` with `∂Ω⁺ = {n₃ > 0}`.

use super::{contour, quad, Surface};
use crate::error::{Error, Result};
use nalgebra::Vector3;

/// Surface integrand on the spherical parametrization `p = ρ(θ,φ) u(θ,φ)`:
/// `n₃ |p_θ × p_φ|`, with the partials obtained by implicit
/// differentiation of `F(ρ u) = 0`.
fn integrand(surface: &Surface, theta: f64, phi: f64, rho_guess: &mut f64) -> Result<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let u = Vector3::new(st * cp, st * sp, ct);
    let u_theta = Vector3::new(ct * cp, ct * sp, -st);
    let u_phi = Vector3::new(-st * sp, st * cp, 0.0);

    // Newton for ρ along the ray.
    let mut rho = *rho_guess;
    for _ in 0..60 {
        let p = rho * u;
        let f = surface.value(&p);
        let df = surface.gradient(&p).dot(&u);
        if df.abs() < 1e-300 {
            return Err(Error::QuadratureNonconvergence(format!(
                "stationary ray at θ={theta}, φ={phi}"
            )));
        }
        let step = f / df;
        rho -= step;
        if step.abs() < 1e-15 * rho.abs().max(1.0) {
            break;
        }
    }
    *rho_guess = rho;
    let p = rho * u;
    let grad = surface.gradient(&p);
    let g_u = grad.dot(&u);
    let rho_theta = -rho * grad.dot(&u_theta) / g_u;
    let rho_phi = -rho * grad.dot(&u_phi) / g_u;
    let p_theta = rho_theta * u + rho * u_theta;
    let p_phi = rho_phi * u + rho * u_phi;
    let area_element = p_theta.cross(&p_phi).norm();
    let n3 = grad.z / grad.norm();
    Ok(n3 * area_element)
}

/// Flux of `e₃` through `{n₃ > 0}` by Gauss–Legendre in the polar angle
/// and periodic trapezoid in azimuth, with `n` nodes per axis.
fn upper_flux(surface: &Surface, n: usize) -> Result<f64> {
    let (nodes, weights) = quad::gauss_legendre(n);
    let n_phi = 2 * n;
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    // For z-symmetric surfaces n₃ > 0 is exactly the upper half θ < π/2.
    let half = 0.5 * std::f64::consts::PI;
    for k in 0..n_phi {
        let phi = k as f64 * dphi;
        let mut rho_guess = 1.0;
        let mut col = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let theta = 0.5 * half * (x + 1.0);
            col += w * integrand(surface, theta, phi, &mut rho_guess)?;
        }
        total += col * 0.5 * half * dphi;
    }
    Ok(total)
}

/// Mean circulation `⟨f⟩ = (1/|Γ|) ∫_{∂Ω⁺} n₃ dS`.
///
/// `quad_points` is the per-axis node count (so the grid has about
/// `2·quad_points²` evaluations); at least 64 is required. The quadrature
/// is re-run at 1.5× refinement and must agree to 1e-8 relative.
pub fn mean_circulation(surface: &Surface, quad_points: usize) -> Result<f64> {
    if !surface.z_symmetric {
        return Err(Error::UnsupportedSurface(
            "mean circulation needs the z-symmetric upper-half split".into(),
        ));
    }
    if quad_points < 64 {
        return Err(Error::InvalidInput(format!(
            "quad_points = {quad_points} < 64"
        )));
    }
    let coarse = upper_flux(surface, quad_points)?;
    let fine = upper_flux(surface, quad_points + quad_points / 2)?;
    if (coarse - fine).abs() > 1e-8 * fine.abs().max(1.0) {
        return Err(Error::QuadratureNonconvergence(format!(
            "upper flux {coarse} vs refined {fine}"
        )));
    }
    let frame = contour::extract_gamma(surface, 64)?;
    Ok(fine / frame.total_length())
}

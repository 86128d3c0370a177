//! Extraction of the apparent contour for z-symmetric surfaces.
//!
//! When the surface is invariant under `z ↦ -z`, the normal is horizontal
//! exactly on the section `{z = 0}`, so `Γ` is that planar curve. It is
//! traced in polar form `ρ(θ)` from the origin (the section must be
//! star-shaped with respect to it), reparametrized by arc length through
//! high-order quadrature of `√(ρ² + ρ'²)`, and resampled uniformly.

use super::{GammaFrame, GammaSample, Surface};
use crate::error::{Error, Result};
use crate::surface_geometry::quad;
use nalgebra::Vector3;

const E3: Vector3<f64> = Vector3::new(0.0, 0.0, 1.0);

/// Planar section radius solver: `F(ρ cos θ, ρ sin θ, 0) = 0`.
struct PolarSection<'a> {
    surface: &'a Surface,
}

impl<'a> PolarSection<'a> {
    fn value(&self, rho: f64, theta: f64) -> f64 {
        self.surface
            .value(&Vector3::new(rho * theta.cos(), rho * theta.sin(), 0.0))
    }

    /// ∂F/∂ρ along the ray.
    fn radial_derivative(&self, rho: f64, theta: f64) -> f64 {
        let dir = Vector3::new(theta.cos(), theta.sin(), 0.0);
        self.surface
            .gradient(&Vector3::new(rho * dir.x, rho * dir.y, 0.0))
            .dot(&dir)
    }

    /// ∂F/∂θ at fixed ρ.
    fn angular_derivative(&self, rho: f64, theta: f64) -> f64 {
        let p = Vector3::new(rho * theta.cos(), rho * theta.sin(), 0.0);
        let dtheta = Vector3::new(-rho * theta.sin(), rho * theta.cos(), 0.0);
        self.surface.gradient(&p).dot(&dtheta)
    }

    /// Newton solve for ρ(θ) from a starting guess.
    fn solve(&self, theta: f64, guess: f64) -> Result<f64> {
        let mut rho = guess;
        for _ in 0..60 {
            let f = self.value(rho, theta);
            let df = self.radial_derivative(rho, theta);
            if df.abs() < 1e-300 {
                return Err(Error::ContourTracing(format!(
                    "stationary radial derivative at θ = {theta}"
                )));
            }
            let step = f / df;
            rho -= step;
            if !(rho > 0.0) || !rho.is_finite() {
                return Err(Error::ContourTracing(format!(
                    "radius left the positive axis at θ = {theta}"
                )));
            }
            if step.abs() < 1e-15 * rho {
                return Ok(rho);
            }
        }
        Err(Error::ContourTracing(format!(
            "radius iteration did not converge at θ = {theta}"
        )))
    }

    /// `ρ'(θ) = -F_θ / F_ρ` by implicit differentiation.
    fn rho_prime(&self, rho: f64, theta: f64) -> f64 {
        -self.angular_derivative(rho, theta) / self.radial_derivative(rho, theta)
    }

    /// Arc-length integrand `√(ρ² + ρ'²)` at θ, solving ρ from `guess`.
    fn speed(&self, theta: f64, guess: f64) -> Result<(f64, f64)> {
        let rho = self.solve(theta, guess)?;
        let rp = self.rho_prime(rho, theta);
        Ok(((rho * rho + rp * rp).sqrt(), rho))
    }
}

/// Find a first boundary radius along `θ = 0` by outward marching and
/// bisection.
fn seed_radius(section: &PolarSection<'_>) -> Result<f64> {
    let inside = section.value(1e-9, 0.0);
    if !(inside < 0.0) {
        return Err(Error::ContourTracing(
            "origin is not interior to the planar section".into(),
        ));
    }
    let mut lo = 1e-9;
    let mut hi = 1e-3;
    let mut found = false;
    for _ in 0..80 {
        if section.value(hi, 0.0) > 0.0 {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !found {
        return Err(Error::ContourTracing(
            "no boundary crossing found along θ = 0".into(),
        ));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if section.value(mid, 0.0) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    section.solve(0.0, 0.5 * (lo + hi))
}

/// Trace the apparent contour of a z-symmetric surface and resample it
/// uniformly in arc length.
///
/// Returns a partial [`GammaFrame`]: positions, unit tangents `∂_sγ`, unit
/// transverse directions `∂_rγ`, outward normals and the field angle `φ`.
/// Curvature-level fields stay NaN until [`super::gamma_frame`] completes
/// them.
///
/// The contour is traversed counterclockwise (seen from `+z`); together
/// with the direct orthonormal frame `(∂_rγ, ∂_sγ, n)` this puts the
/// `n₃ > 0` side at `r < 0`.
pub fn extract_gamma(surface: &Surface, num_samples: usize) -> Result<GammaFrame> {
    if !surface.z_symmetric {
        return Err(Error::UnsupportedSurface(
            "contour tracing requires a z-symmetric surface (Γ is then the z = 0 section)".into(),
        ));
    }
    if num_samples < 16 {
        return Err(Error::InvalidInput(format!(
            "num_samples = {num_samples} < 16"
        )));
    }
    let section = PolarSection { surface };
    let rho0 = seed_radius(&section)?;

    // Dense angular grid for the cumulative arc length.
    let dense = (16 * num_samples).max(4096);
    let dtheta = 2.0 * std::f64::consts::PI / dense as f64;
    let mut rho_dense = Vec::with_capacity(dense + 1);
    let mut guess = rho0;
    for j in 0..=dense {
        let theta = j as f64 * dtheta;
        let rho = section.solve(theta, guess)?;
        rho_dense.push(rho);
        guess = rho;
    }
    // Closure of the polar trace.
    if (rho_dense[dense] - rho_dense[0]).abs() > 1e-9 * rho0.max(1.0) {
        return Err(Error::ContourTracing(format!(
            "polar trace did not close: Δρ = {:.3e}",
            rho_dense[dense] - rho_dense[0]
        )));
    }

    // Cumulative arc length by per-interval Gauss–Legendre.
    let (gl_nodes, gl_weights) = quad::gauss_legendre(6);
    let mut cumulative = Vec::with_capacity(dense + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for j in 0..dense {
        let a = j as f64 * dtheta;
        let mut seg = 0.0;
        for (x, w) in gl_nodes.iter().zip(&gl_weights) {
            let theta = a + 0.5 * dtheta * (x + 1.0);
            let frac = 0.5 * (x + 1.0);
            let guess = rho_dense[j] * (1.0 - frac) + rho_dense[j + 1] * frac;
            let (speed, _) = section.speed(theta, guess)?;
            seg += w * speed;
        }
        acc += 0.5 * dtheta * seg;
        cumulative.push(acc);
    }
    let total_length = acc;

    // Invert s(θ) at the uniform arc-length targets.
    let ds = total_length / num_samples as f64;
    let mut thetas = Vec::with_capacity(num_samples);
    for i in 0..num_samples {
        let target = i as f64 * ds;
        // Bracketing interval on the dense grid.
        let j = cumulative.partition_point(|&s| s <= target).max(1) - 1;
        let j = j.min(dense - 1);
        let mut theta = j as f64 * dtheta
            + dtheta * (target - cumulative[j]) / (cumulative[j + 1] - cumulative[j]);
        // Newton on s(θ) - target, integrating the speed from the interval
        // start with Gauss–Legendre.
        let mut rho_guess = rho_dense[j];
        for _ in 0..40 {
            let a = j as f64 * dtheta;
            let mut seg = 0.0;
            let width = theta - a;
            if width.abs() > 1e-300 {
                for (x, w) in gl_nodes.iter().zip(&gl_weights) {
                    let t = a + 0.5 * width * (x + 1.0);
                    let (speed, rho) = section.speed(t, rho_guess)?;
                    rho_guess = rho;
                    seg += w * speed;
                }
                seg *= 0.5 * width;
            }
            let s_here = cumulative[j] + seg;
            let (speed, _) = section.speed(theta, rho_guess)?;
            let step = (s_here - target) / speed;
            theta -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        thetas.push(theta);
    }

    // Build the frame samples.
    let mut samples = Vec::with_capacity(num_samples);
    let mut rho_guess = rho0;
    for (i, &theta) in thetas.iter().enumerate() {
        let rho = section.solve(theta, rho_guess)?;
        rho_guess = rho;
        let gamma = Vector3::new(rho * theta.cos(), rho * theta.sin(), 0.0);
        let rp = section.rho_prime(rho, theta);
        let tangent_raw = Vector3::new(
            rp * theta.cos() - rho * theta.sin(),
            rp * theta.sin() + rho * theta.cos(),
            0.0,
        );
        let ds_gamma = tangent_raw / tangent_raw.norm();
        let normal = surface.normal(&gamma);
        if normal.z.abs() > 1e-8 {
            return Err(Error::ContourTracing(format!(
                "normal is not horizontal on the section: n₃ = {:.3e} at sample {i}",
                normal.z
            )));
        }
        let dr_gamma = ds_gamma.cross(&normal);
        // Counterclockwise traversal makes ∂_rγ point below the plane,
        // which is the `n₃ > 0 for r < 0` orientation.
        if dr_gamma.z >= 0.0 {
            return Err(Error::ContourTracing(
                "transverse direction points upward; traversal orientation broken".into(),
            ));
        }
        let sin_phi = E3.dot(&ds_gamma).clamp(-1.0, 1.0);
        samples.push(GammaSample {
            s: i as f64 * ds,
            gamma,
            dr_gamma,
            ds_gamma,
            normal,
            phi: sin_phi.asin(),
            beta: f64::NAN,
            kappa_g: f64::NAN,
            e_coeff: f64::NAN,
            k_coeff: f64::NAN,
        });
    }

    // Closure at full period: the sample continued to s = |Γ| must land on
    // the first one.
    let closure_gap = (samples[0].gamma
        - Vector3::new(
            rho_dense[dense] * (2.0 * std::f64::consts::PI).cos(),
            rho_dense[dense] * (2.0 * std::f64::consts::PI).sin(),
            0.0,
        ))
    .norm();
    if closure_gap > 1e-9 * rho0.max(1.0) {
        return Err(Error::ContourTracing(format!(
            "contour closure gap {closure_gap:.3e}"
        )));
    }

    Ok(GammaFrame {
        half_length: 0.5 * total_length,
        samples,
        alpha0: None,
    })
}

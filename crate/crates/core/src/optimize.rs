//! Deterministic 1D minimization and finite-difference derivatives.
//!
//! Spectral curves here are smooth, expensive to evaluate, and free of
//! noise beyond machine rounding, so a golden-section/parabolic (Brent)
//! refinement with a stationarity polish is the right tool. No randomness.

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_2; // 2 - golden ratio

/// Result of a 1D curve minimization.
#[derive(Debug, Clone, Copy)]
pub struct CurveMinimum {
    /// Location of the minimum.
    pub x: f64,
    /// Value at the minimum.
    pub value: f64,
    /// Central-difference second derivative at the minimum.
    pub second_derivative: f64,
}

/// Verify that `(a, b)` brackets an interior minimum by golden probing,
/// returning an interior point lower than both ends.
fn interior_low_point<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<(f64, f64)> {
    let fa = f(a)?;
    let fb = f(b)?;
    // Probe a deterministic ladder of interior points.
    for &frac in &[GOLDEN, 1.0 - GOLDEN, 0.5, 0.25, 0.75, 0.125, 0.875] {
        let x = a + frac * (b - a);
        let fx = f(x)?;
        if fx < fa && fx < fb {
            return Ok((x, fx));
        }
    }
    Err(Error::BracketInvalid(format!(
        "no interior point of ({a}, {b}) lies below both endpoint values ({fa}, {fb})"
    )))
}

/// Brent minimization of `f` on the bracket `(a, b)` to tolerance `tol` in x.
///
/// The bracket must isolate a single interior minimum; this is probed before
/// refinement starts and an [`Error::BracketInvalid`] is returned otherwise.
pub fn brent_minimize<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    bracket: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    if !(tol > 0.0) || !bracket.0.is_finite() || !bracket.1.is_finite() || bracket.0 >= bracket.1 {
        return Err(Error::InvalidInput(format!(
            "invalid bracket {bracket:?} or tolerance {tol}"
        )));
    }
    let (mut a, mut b) = bracket;
    let (x0, fx0) = interior_low_point(&mut f, a, b)?;

    let mut x = x0;
    let mut w = x0;
    let mut v = x0;
    let mut fx = fx0;
    let mut fw = fx0;
    let mut fv = fx0;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = tol.max(f64::EPSILON * x.abs());
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabolic interpolation through (x, w, v).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_old = e;
            e = d;
            if p.abs() < (0.5 * q * e_old).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if m > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u)?;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok((x, fx))
}

/// Fourth-order central second derivative (5-point stencil).
///
/// The step must be chosen against the evaluation noise: for eigenvalue
/// curves with ~1e-13 rounding noise, `h ≈ 0.02` balances the O(h⁴)
/// truncation against the O(noise/h²) amplification at the 1e-8 level.
pub fn second_derivative<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    x: f64,
    h: f64,
) -> Result<f64> {
    let fm2 = f(x - 2.0 * h)?;
    let fm1 = f(x - h)?;
    let f0 = f(x)?;
    let fp1 = f(x + h)?;
    let fp2 = f(x + 2.0 * h)?;
    Ok((-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h))
}

/// Newton polish of a stationary point using fourth-order finite-difference
/// first and second derivatives at step `h`. Deterministic, at most `iters`
/// steps, each clamped to `h` so the polish cannot escape the basin.
pub fn polish_stationary<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    x0: f64,
    h: f64,
    iters: usize,
) -> Result<f64> {
    let mut x = x0;
    for _ in 0..iters {
        let fm2 = f(x - 2.0 * h)?;
        let fm1 = f(x - h)?;
        let f0 = f(x)?;
        let fp1 = f(x + h)?;
        let fp2 = f(x + 2.0 * h)?;
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        if d2 <= 0.0 {
            break;
        }
        let step = (d1 / d2).clamp(-h, h);
        x -= step;
        if step.abs() < 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

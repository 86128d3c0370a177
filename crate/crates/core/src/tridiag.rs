//! Symmetric tridiagonal eigenvalue extraction.
//!
//! The 1D model operators discretize to symmetric tridiagonal matrices, and
//! only their lowest eigenpair is needed. The solver here is deterministic:
//! Sturm-sequence bisection locates the k-th eigenvalue to near machine
//! precision, then inverse iteration recovers the eigenvector and a final
//! Rayleigh quotient polishes the value.

use crate::error::{Error, Result};

/// Count eigenvalues of the symmetric tridiagonal matrix strictly below
/// `lambda`, via the Sturm sequence (number of negative pivots of the
/// LDLᵀ factorization of `T - λI`).
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    debug_assert_eq!(off.len(), n.saturating_sub(1));
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        // Guard against exact-zero pivots without branching on sign flips.
        let q_safe = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval enclosing the whole spectrum.
fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo - 1.0, hi + 1.0)
}

/// Locate the `k`-th smallest eigenvalue (0-based) by bisection.
pub fn eigenvalue_bisect(diag: &[f64], off: &[f64], k: usize) -> Result<f64> {
    let n = diag.len();
    if n == 0 || k >= n {
        return Err(Error::InvalidInput(format!(
            "eigenvalue index {k} out of range for matrix of size {n}"
        )));
    }
    let (mut a, mut b) = gershgorin_bounds(diag, off);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        if sturm_count(diag, off, mid) <= k {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

fn guard_pivot(p: f64) -> f64 {
    if p.abs() < 1e-300 {
        if p >= 0.0 {
            1e-300
        } else {
            -1e-300
        }
    } else {
        p
    }
}

/// Solve `(T - shift I) x = rhs` for tridiagonal `T`, with partial pivoting
/// between adjacent rows so near-singular shifts stay stable.
///
/// Row swaps introduce fill-in on a second superdiagonal, so the factored
/// form is banded with bandwidth (0, 2).
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let mut d = vec![0.0; n]; // main diagonal of the reduced matrix
    let mut u1 = vec![0.0; n]; // first superdiagonal
    let mut u2 = vec![0.0; n]; // second superdiagonal (fill-in from swaps)
    for i in 0..n {
        d[i] = diag[i] - shift;
    }
    if n > 1 {
        u1[..n - 1].copy_from_slice(&off[..n - 1]);
    }

    for i in 0..n.saturating_sub(1) {
        // Entering this step, row i is (d[i], u1[i], u2[i]) at columns
        // (i, i+1, i+2) and row i+1 is still the original
        // (off[i], d[i+1], off[i+1]) at columns (i, i+1, i+2).
        let sub = off[i];
        let next_off = if i + 1 < n - 1 { off[i + 1] } else { 0.0 };
        if sub.abs() > d[i].abs() {
            let (pi, pu1, pu2) = (d[i], u1[i], u2[i]);
            // Swap rows i and i+1; the old row i+1 becomes the pivot row.
            d[i] = sub;
            u1[i] = d[i + 1];
            u2[i] = next_off;
            rhs.swap(i, i + 1);
            let m = pi / sub;
            d[i + 1] = pu1 - m * u1[i];
            u1[i + 1] = pu2 - m * u2[i];
            rhs[i + 1] -= m * rhs[i];
        } else {
            let m = sub / guard_pivot(d[i]);
            d[i + 1] -= m * u1[i];
            u1[i + 1] = next_off - m * u2[i];
            rhs[i + 1] -= m * rhs[i];
        }
    }
    for i in (0..n).rev() {
        let mut x = rhs[i];
        if i + 1 < n {
            x -= u1[i] * rhs[i + 1];
        }
        if i + 2 < n {
            x -= u2[i] * rhs[i + 2];
        }
        rhs[i] = x / guard_pivot(d[i]);
    }
}

/// Lowest eigenpair of a symmetric tridiagonal matrix.
///
/// Bisection to near machine precision, then inverse iteration from a
/// deterministic all-ones start, then one Rayleigh-quotient polish of the
/// eigenvalue. The returned vector has unit Euclidean norm and nonnegative
/// entry of largest magnitude.
pub fn lowest_eigenpair(diag: &[f64], off: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = diag.len();
    let lambda = eigenvalue_bisect(diag, off, 0)?;
    // Shift slightly below the eigenvalue so the solve is well posed.
    let scale = diag.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let shift = lambda - 1e-10 * scale.max(1.0);

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut rayleigh = lambda;
    for iter in 0..8 {
        solve_shifted(diag, off, shift, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Eigensolver(
                "inverse iteration produced a non-finite vector".into(),
            ));
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        // Rayleigh quotient and residual.
        let (rq, res) = rayleigh_and_residual(diag, off, &v);
        rayleigh = rq;
        if res < 1e-12 * scale.max(1.0) && iter >= 1 {
            break;
        }
    }
    // Sign convention: largest-magnitude entry positive.
    let mut imax = 0;
    for i in 1..n {
        if v[i].abs() > v[imax].abs() {
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    Ok((rayleigh, v))
}

fn rayleigh_and_residual(diag: &[f64], off: &[f64], v: &[f64]) -> (f64, f64) {
    let n = v.len();
    let mut tv = vec![0.0; n];
    for i in 0..n {
        let mut y = diag[i] * v[i];
        if i > 0 {
            y += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            y += off[i] * v[i + 1];
        }
        tv[i] = y;
    }
    let rq: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
    let res = tv
        .iter()
        .zip(v)
        .map(|(t, x)| {
            let r = t - rq * x;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    (rq, res)
}

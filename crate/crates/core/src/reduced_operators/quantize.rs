//! Midpoint (Weyl-like) quantization of a periodic symbol.
//!
//! On the periodic `s`-grid `s_j = jΔ`, `Δ = P/N`, with integer Fourier
//! multipliers `ω_m = 2πm/P`, `m = -N/2..N/2-1`, the matrix
//!
//! `M_{jk} = (1/N) Σ_m b(mid(s_j, s_k), ε ω_m) e^{i ω_m (s_j - s_k)}`
//!
//! is Hermitian for real `b` and agrees with the Weyl quantization of
//! `b(s, εσ)` to the order needed here (ordering discrepancies enter at
//! O(ε²), below the harmonic term). On the circle the midpoint is taken
//! along the *short* arc — the literal `(s_j+s_k)/2` lands on the opposite
//! side for chords crossing the periodic wrap and poisons the spectrum
//! whenever the symbol's well sits near `s = 0`. Either way the midpoints
//! live on the half-grid `pΔ/2`, `p = 0..2N`, and along every
//! anti-diagonal the m-sum is an inverse DFT in `j-k`, so the assembly is
//! FFT-fast.

use crate::error::{Error, Result};
use crate::fourier;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Quantized band: the Hermitian matrix and its full ascending spectrum.
#[derive(Debug, Clone)]
pub struct QuantizedBand {
    pub epsilon: f64,
    pub num_points: usize,
    pub matrix: DMatrix<Complex64>,
    /// Ascending real eigenvalues.
    pub eigenvalues: Vec<f64>,
}

fn validate(epsilon: f64, num_points: usize) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 0.3) {
        return Err(Error::InvalidInput(format!(
            "epsilon = {epsilon} outside (0, 0.3]"
        )));
    }
    if num_points < 128 || !num_points.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "num_points = {num_points} must be a power of two ≥ 128"
        )));
    }
    Ok(())
}

/// Core assembly: the symbol is queried by midpoint index `p` (the point
/// `pΔ/2` on the half-grid, `p = 0..2N`) and dual value `σ`.
pub(crate) fn quantize_on_half_grid<F: FnMut(usize, f64) -> Result<f64>>(
    mut symbol_at: F,
    period: f64,
    epsilon: f64,
    num_points: usize,
) -> Result<QuantizedBand> {
    validate(epsilon, num_points)?;
    let n = num_points;
    let base = 2.0 * std::f64::consts::PI / period;

    // Inverse DFT over the multiplier index per midpoint row.
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(2 * n);
    for p in 0..(2 * n) {
        let mut row = vec![Complex64::new(0.0, 0.0); n];
        for (idx, slot) in row.iter_mut().enumerate() {
            let m = if idx < n / 2 {
                idx as isize
            } else {
                idx as isize - n as isize
            };
            let sigma = epsilon * base * m as f64;
            *slot = Complex64::new(symbol_at(p, sigma)?, 0.0);
        }
        fourier::fft_inverse(&mut row);
        for v in row.iter_mut() {
            *v /= n as f64;
        }
        rows.push(row);
    }

    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let dist = j as isize - k as isize;
            // Short-arc midpoint: shift by half a period when the chord
            // wraps around the circle.
            let wraps = dist.unsigned_abs() > n / 2;
            let p = (j + k + if wraps { n } else { 0 }) % (2 * n);
            let d = (j + n - k) % n;
            matrix[(j, k)] = rows[p][d];
        }
    }
    // Hermitian by construction; symmetrize the last rounding bits away.
    let adjoint = matrix.adjoint();
    let matrix = (matrix + adjoint) * Complex64::new(0.5, 0.0);

    let eig = matrix.clone().symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(QuantizedBand {
        epsilon,
        num_points,
        matrix,
        eigenvalues,
    })
}

/// Quantize the symbol `b(s, σ)` (periodic in `s` with period `period`)
/// at semiclassical parameter `epsilon` on `num_points` grid points.
///
/// `num_points` must be a power of two ≥ 128 and `epsilon ∈ (0, 0.3]`.
pub fn quantize_symbol<F: FnMut(f64, f64) -> Result<f64>>(
    mut symbol: F,
    period: f64,
    epsilon: f64,
    num_points: usize,
) -> Result<QuantizedBand> {
    let half_step = 0.5 * period / num_points as f64;
    quantize_on_half_grid(
        |p, sigma| symbol(p as f64 * half_step, sigma),
        period,
        epsilon,
        num_points,
    )
}

//! Cached Montgomery spectral curve with cubic interpolation.
//!
//! Band evaluations need `μ₁^[2](ξ)` at millions of points; each direct
//! eigensolve costs a tridiagonal solve, so the curve is tabulated once on
//! a uniform grid (Richardson-extrapolated values), refined until a cubic
//! interpolant reproduces direct solves to 1e-9, and extended on demand in
//! aligned chunks. Extension happens behind an `RwLock`, so shared readers
//! stay cheap and evaluation is concurrency-safe.

use crate::error::{Error, Result};
use crate::model_operators::{mu1_montgomery_extrapolated, ModelOperatorDiscretization};
use std::sync::RwLock;

/// Interpolation accuracy target against direct solves.
const INTERP_TOL: f64 = 1e-9;
/// Extension chunk (in ξ) when a request falls outside the table.
const CHUNK: f64 = 0.5;

#[derive(Debug, Clone)]
struct Table {
    xi_min: f64,
    step: f64,
    values: Vec<f64>,
}

impl Table {
    fn xi_max(&self) -> f64 {
        self.xi_min + (self.values.len() - 1) as f64 * self.step
    }

    /// Evaluable range (one ghost cell each side for the 4-point stencil).
    fn evaluable(&self) -> (f64, f64) {
        (self.xi_min + self.step, self.xi_max() - self.step)
    }

    /// 4-point Lagrange interpolation on the uniform grid.
    fn eval(&self, xi: f64) -> f64 {
        let pos = (xi - self.xi_min) / self.step;
        let i = (pos.floor() as usize).clamp(1, self.values.len() - 3);
        let t = pos - i as f64;
        let (pm, p0, p1, p2) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        let c_m = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let c_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let c_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let c_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        c_m * pm + c_0 * p0 + c_1 * p1 + c_2 * p2
    }
}

/// Tabulated lowest eigenvalue of the Montgomery operator.
pub struct MontgomeryCurve {
    table: RwLock<Table>,
    resolution: usize,
}

impl std::fmt::Debug for MontgomeryCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let t = self.table.read().unwrap();
        write!(
            f,
            "MontgomeryCurve(range [{}, {}], step {}, {} points)",
            t.xi_min,
            t.xi_max(),
            t.step,
            t.values.len()
        )
    }
}

fn solve(xi: f64, resolution: usize) -> Result<f64> {
    let disc = ModelOperatorDiscretization::montgomery_default(xi).with_num_points(resolution);
    mu1_montgomery_extrapolated(xi, &disc)
}

fn build_table(xi_min: f64, xi_max: f64, step: f64, resolution: usize) -> Result<Table> {
    let n = ((xi_max - xi_min) / step).round() as usize + 1;
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        values.push(solve(xi_min + i as f64 * step, resolution)?);
    }
    Ok(Table {
        xi_min,
        step,
        values,
    })
}

/// Worst interpolation error over deterministic off-grid probes.
fn probe_error(table: &Table, resolution: usize, lo: f64, hi: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let n_cells = table.values.len() - 1;
    for frac in [0.31, 0.5, 0.77] {
        for k in 1..7 {
            let cell = (k * n_cells) / 8;
            let xi = table.xi_min + (cell as f64 + frac) * table.step;
            if xi < lo || xi > hi {
                continue;
            }
            let direct = solve(xi, resolution)?;
            worst = worst.max((table.eval(xi) - direct).abs());
        }
    }
    Ok(worst)
}

impl MontgomeryCurve {
    /// Build the table over `[xi_min, xi_max]`, refining the step until the
    /// cubic interpolant matches direct solves to 1e-9 at probe points.
    ///
    /// `resolution` is the base grid count of each eigensolve (values are
    /// Richardson pairs at `resolution` and `2·resolution`).
    pub fn new(xi_min: f64, xi_max: f64, resolution: usize) -> Result<Self> {
        if !(xi_max > xi_min) {
            return Err(Error::InvalidInput(format!(
                "empty Montgomery range [{xi_min}, {xi_max}]"
            )));
        }
        // Pad by one chunk so the requested range is strictly evaluable.
        let lo = (xi_min - CHUNK).div_euclid(CHUNK) * CHUNK;
        let hi = (xi_max + CHUNK).div_euclid(CHUNK) * CHUNK + CHUNK;
        // Steps divide the extension chunk evenly so appended cells stay on
        // the uniform grid.
        let mut step = 0.05;
        for _ in 0..6 {
            let table = build_table(lo, hi, step, resolution)?;
            let err = probe_error(&table, resolution, xi_min, xi_max)?;
            if err < INTERP_TOL {
                return Ok(Self {
                    table: RwLock::new(table),
                    resolution,
                });
            }
            step *= 0.5;
        }
        Err(Error::TableRange(format!(
            "interpolation tolerance {INTERP_TOL} not reached down to step {step}"
        )))
    }

    /// Default curve: range wide enough for band minimization on the
    /// built-in surfaces, eigensolves at the 2000/4000 Richardson pair.
    pub fn with_default_range() -> Result<Self> {
        Self::new(-1.5, 2.0, 2000)
    }

    /// Currently evaluable ξ-range.
    pub fn range(&self) -> (f64, f64) {
        self.table.read().unwrap().evaluable()
    }

    /// Extend the table so that `[lo, hi]` becomes evaluable.
    pub fn ensure_range(&self, lo: f64, hi: f64) -> Result<()> {
        loop {
            let (want_lo, want_hi) = {
                let t = self.table.read().unwrap();
                let (elo, ehi) = t.evaluable();
                (lo < elo, hi > ehi)
            };
            if !want_lo && !want_hi {
                return Ok(());
            }
            let mut t = self.table.write().unwrap();
            if lo < t.evaluable().0 {
                let n_new = (CHUNK / t.step).ceil() as usize;
                let new_min = t.xi_min - n_new as f64 * t.step;
                let mut prefix = Vec::with_capacity(n_new + t.values.len());
                for i in 0..n_new {
                    prefix.push(solve(new_min + i as f64 * t.step, self.resolution)?);
                }
                prefix.extend_from_slice(&t.values);
                t.values = prefix;
                t.xi_min = new_min;
            }
            if hi > t.evaluable().1 {
                let old_max = t.xi_max();
                let n_new = (CHUNK / t.step).ceil() as usize;
                let step = t.step;
                for i in 1..=n_new {
                    let v = solve(old_max + i as f64 * step, self.resolution)?;
                    t.values.push(v);
                }
            }
        }
    }

    /// Interpolated `μ₁^[2](ξ)`, extending the table if needed.
    pub fn mu1(&self, xi: f64) -> Result<f64> {
        if !xi.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite ξ = {xi}")));
        }
        {
            let t = self.table.read().unwrap();
            let (lo, hi) = t.evaluable();
            if xi >= lo && xi <= hi {
                return Ok(t.eval(xi));
            }
        }
        self.ensure_range(xi, xi)?;
        let t = self.table.read().unwrap();
        Ok(t.eval(xi))
    }

    /// Direct (table-free) Richardson eigensolve at the curve's resolution.
    pub fn mu1_direct(&self, xi: f64) -> Result<f64> {
        solve(xi, self.resolution)
    }
}

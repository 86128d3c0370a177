//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its measured margins (run with `--nocapture` to see them on
//! success). Shared expensive state (model constants, frames, band
//! analyses) is computed once behind `OnceLock`s.

use magcontour_core::asymptotics::*;
use magcontour_core::model_operators::*;
use magcontour_core::reduced_operators::*;
use magcontour_core::surface_geometry::*;
use std::sync::OnceLock;
use std::time::Instant;

fn consts_at(n: usize) -> ModelConstants {
    model_constants(
        &ModelOperatorDiscretization::de_gennes_default(1.0).with_num_points(n),
        &ModelOperatorDiscretization::montgomery_default(1.0).with_num_points(n),
        1e-10,
    )
    .expect("model constants")
}

fn consts() -> &'static ModelConstants {
    static C: OnceLock<ModelConstants> = OnceLock::new();
    C.get_or_init(|| consts_at(4000))
}

fn egg_band() -> &'static (Band, BandAnalysis) {
    static B: OnceLock<(Band, BandAnalysis)> = OnceLock::new();
    B.get_or_init(|| {
        let egg = Surface::egg(1.0, 1.5, 1.0, 0.25).unwrap();
        let frame = gamma_frame(&egg, 256, consts()).unwrap();
        band_analysis(&frame, consts()).unwrap()
    })
}

struct Criterion {
    name: &'static str,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            start: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, label: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{label}: {detail}"));
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        if self.failures.is_empty() {
            println!("[PASS] {} ({elapsed:.2?})", self.name);
        } else {
            println!("[FAIL] {} ({elapsed:.2?})", self.name);
            for f in &self.failures {
                println!("       {f}");
            }
            panic!("criterion failed: {}", self.name);
        }
    }
}

#[test]
fn criterion_1_model_constant_stability() {
    let mut cr = Criterion::new("criterion 1: model-constant stability");
    let c1 = consts();
    let c2 = consts_at(8000);
    for (name, a, b) in [
        ("theta0", c1.theta0, c2.theta0),
        ("xi0", c1.xi0, c2.xi0),
        ("alpha0", c1.alpha0, c2.alpha0),
        ("theta0_m2", c1.theta0_m2, c2.theta0_m2),
        ("xi0_m2", c1.xi0_m2, c2.xi0_m2),
    ] {
        let d = (a - b).abs();
        cr.check(name, d < 1e-7, format!("|Δ| = {d:.3e} ≥ 1e-7"));
    }
    let disc = ModelOperatorDiscretization::de_gennes_default(1.0);
    for xi in [0.3, c1.xi0, 1.2] {
        let fd = mu1_de_gennes_extrapolated(xi, &disc).unwrap();
        let shoot = mu1_de_gennes_shooting(xi, 14.0, 2.5e-4).unwrap();
        let d = (fd - shoot).abs();
        cr.check(
            "shooting vs finite differences",
            d < 1e-7,
            format!("xi = {xi}: |Δ| = {d:.3e} ≥ 1e-7"),
        );
    }
    let mu0 = mu1_de_gennes(0.0, &disc).unwrap().mu1;
    cr.check(
        "mu1(0) = 1",
        (mu0 - 1.0).abs() < 2e-4,
        format!("|mu1(0) - 1| = {:.3e}", (mu0 - 1.0).abs()),
    );
    let stat = (c1.theta0 - c1.xi0 * c1.xi0).abs();
    cr.check(
        "stationarity mu1(xi0) = xi0²",
        stat < 1e-6,
        format!("residual {stat:.3e}"),
    );
    cr.finish();
}

#[test]
fn criterion_2_geometry_invariants() {
    let mut cr = Criterion::new("criterion 2: geometry invariants");
    let c = consts();
    for surface in [
        Surface::ellipsoid(2.0, 1.0, 1.0).unwrap(),
        Surface::sphere(1.0).unwrap(),
    ] {
        // 256 samples: the spectral truncation of the aspect-2 ellipse
        // sits below 1e-12 there, against 4e-9 at 128.
        let frame = gamma_frame(&surface, 256, c).unwrap();
        let chart = geodesic_extend(&surface, &frame, 0.15, 60).unwrap();
        cr.check(
            "|∂_rγ| = 1",
            chart.drift.speed < 1e-9,
            format!("{}: speed drift {:.3e}", surface.descriptor(), chart.drift.speed),
        );
        let mut max_ortho = 0.0f64;
        let mut max_norm = 0.0f64;
        for i in 0..chart.r_grid.len() {
            for j in 0..frame.num_samples() {
                max_ortho = max_ortho
                    .max(chart.dr_gamma[i][j].dot(&chart.ds_gamma[i][j]).abs());
                let nn = chart.b1[i][j].powi(2)
                    + chart.alpha[i][j] * chart.b2[i][j].powi(2)
                    + chart.b3[i][j].powi(2);
                max_norm = max_norm.max((nn - 1.0).abs());
            }
        }
        cr.check(
            "⟨∂_rγ, ∂_sγ⟩ = 0",
            max_ortho < 1e-8,
            format!("{}: {max_ortho:.3e}", surface.descriptor()),
        );
        cr.check(
            "field frame normalization",
            max_norm < 1e-8,
            format!("{}: {max_norm:.3e}", surface.descriptor()),
        );
        let center = chart.center_index();
        let mut max_alpha = 0.0f64;
        for j in 0..frame.num_samples() {
            max_alpha = max_alpha.max((chart.alpha[center][j] - 1.0).abs());
        }
        cr.check(
            "α(0,s) = 1",
            max_alpha < 1e-9,
            format!("{}: {max_alpha:.3e}", surface.descriptor()),
        );
        // ∂_rα(0,s) + 2κ_g = 0 via the fine stencil used by gamma_frame.
        let stencil = geodesic_extend(&surface, &frame, 2e-3, 2).unwrap();
        let h = stencil.r_step();
        let mut max_kg = 0.0f64;
        for j in 0..frame.num_samples() {
            let al = |i: usize| stencil.alpha[i][j];
            let d_alpha = (al(0) - 8.0 * al(1) + 8.0 * al(3) - al(4)) / (12.0 * h);
            max_kg = max_kg.max((d_alpha + 2.0 * frame.samples[j].kappa_g).abs());
        }
        cr.check(
            "∂_rα(0,s) = -2κ_g",
            max_kg < 1e-5,
            format!("{}: {max_kg:.3e}", surface.descriptor()),
        );
    }
    // Sphere metric closed form.
    let sphere = Surface::sphere(1.0).unwrap();
    let fs = gamma_frame(&sphere, 128, c).unwrap();
    let chart = geodesic_extend(&sphere, &fs, 0.15, 60).unwrap();
    let mut worst = 0.0f64;
    for (i, &r) in chart.r_grid.iter().enumerate() {
        for j in 0..fs.num_samples() {
            worst = worst.max((chart.alpha[i][j] - r.cos().powi(2)).abs());
        }
    }
    cr.check("sphere α = cos²r", worst < 1e-8, format!("{worst:.3e}"));
    // Major-axis transverse curvature.
    let ell = Surface::ellipsoid(2.0, 1.0, 1.0).unwrap();
    let fe = gamma_frame(&ell, 128, c).unwrap();
    let d = (fe.samples[0].beta - 2.0).abs();
    cr.check("|β| = a/c² at (a,0,0)", d < 1e-6, format!("{d:.3e}"));
    cr.finish();
}

#[test]
fn criterion_3_cancellation_residual() {
    let mut cr = Criterion::new("criterion 3: algebraic cancellation");
    let c = consts();
    let surface = Surface::ellipsoid(2.0, 1.0, 1.0).unwrap();
    let frame = gamma_frame(&surface, 128, c).unwrap();
    let chart = geodesic_extend(&surface, &frame, 2e-3, 2).unwrap();
    let mut worst = 0.0f64;
    for k in 0..32 {
        let j = k * frame.num_samples() / 32;
        let br = cancellation_breakdown(&surface, &chart, j).unwrap();
        worst = worst.max(br.residual);
    }
    cr.check(
        "|-2u₂cosφ + 2u₁sinφ + cos²φ ∂_r(α⁻¹)| < 1e-4 at 32 samples",
        worst < 1e-4,
        format!("worst residual {worst:.3e}"),
    );
    cr.finish();
}

#[test]
fn criterion_4_flux_constant() {
    let mut cr = Criterion::new("criterion 4: flux constant");
    let sphere = Surface::sphere(1.0).unwrap();
    let f = mean_circulation(&sphere, 64).unwrap();
    cr.check(
        "sphere ⟨f⟩ = R/2",
        (f - 0.5).abs() < 1e-6,
        format!("|Δ| = {:.3e}", (f - 0.5).abs()),
    );
    let ell = Surface::ellipsoid(2.0, 1.0, 1.0).unwrap();
    let frame = extract_gamma(&ell, 128).unwrap();
    let expected = std::f64::consts::PI * 2.0 / frame.total_length();
    let f = mean_circulation(&ell, 64).unwrap();
    cr.check(
        "ellipsoid ⟨f⟩ = πab/|Γ|",
        (f - expected).abs() < 1e-6,
        format!("|Δ| = {:.3e}", (f - expected).abs()),
    );
    cr.finish();
}

#[test]
fn criterion_5_band_identification() {
    let mut cr = Criterion::new("criterion 5: reduced-operator band identification");
    let c = consts();
    let surface = Surface::ellipsoid(2.0, 1.0, 1.0).unwrap();
    let frame = gamma_frame(&surface, 256, c).unwrap();
    let band = Band::new(&frame, c).unwrap();
    let analysis = minimize_band(&band).unwrap();
    let mut worst = 0.0f64;
    for i in 0..5 {
        let s = analysis.s_min + (i as f64 - 2.0) * 0.02 * band.period();
        for j in 0..5 {
            let sigma = analysis.sigma_min * (0.7 + 0.15 * j as f64);
            let direct = band.reduced_ground_energy_direct(s, sigma, 2000).unwrap();
            let formula = band.value_direct(s, sigma).unwrap();
            worst = worst.max(((direct - formula) / formula).abs());
        }
    }
    cr.check(
        "5×5 grid: |direct - K μ₁^[2](scaled σ)| / value < 1e-6",
        worst < 1e-6,
        format!("worst relative deviation {worst:.3e}"),
    );
    let d_bmin = (analysis.b_min - analysis.k_min * c.theta0_m2).abs();
    cr.check(
        "b_min = K_min Θ₀^[2]",
        d_bmin < 1e-8,
        format!("|Δ| = {d_bmin:.3e}"),
    );
    let d_sigma = (analysis.sigma_min - band.sigma_pointwise_min(analysis.s_min)).abs();
    cr.check(
        "σ_min closed form",
        d_sigma < 1e-7,
        format!("|Δ| = {d_sigma:.3e}"),
    );
    cr.finish();
}

#[test]
fn criterion_6_harmonic_levels_of_quantized_band() {
    let mut cr = Criterion::new("criterion 6: quantized-band harmonic levels");
    let (band, analysis) = egg_band();
    let omega = analysis.harmonic_gap_coefficient;
    // Scaled defects (λ_n - b_min)/ε - (2n-1)√det/2 for ε-halving pairs.
    let mut defects = Vec::new();
    for (eps, np) in [(0.04, 512usize), (0.02, 512), (0.01, 1024)] {
        let q = band.quantize(eps, np).unwrap();
        let mut row = Vec::new();
        for n in 1..=3usize {
            let scaled = (q.eigenvalues[n - 1] - analysis.b_min) / eps;
            let target = (2.0 * n as f64 - 1.0) * omega / 2.0;
            row.push((scaled - target).abs());
        }
        if (eps - 0.01).abs() < 1e-12 {
            for n in 1..=3usize {
                let gap = q.eigenvalues[n] - q.eigenvalues[n - 1];
                let rel = (gap / (eps * omega) - 1.0).abs();
                cr.check(
                    "gap = ε√det within 5% at ε = 0.01",
                    rel < 0.05,
                    format!("n = {n}: relative gap error {rel:.3e}"),
                );
            }
        }
        defects.push(row);
    }
    for n in 0..3 {
        for pair in 0..2 {
            let ratio = defects[pair][n] / defects[pair + 1][n];
            cr.check(
                "defect halves per ε-halving (ratio in [1.7, 2.3])",
                (1.7..=2.3).contains(&ratio),
                format!(
                    "n = {}: defect {:.3e} -> {:.3e}, ratio {ratio:.3}",
                    n + 1,
                    defects[pair][n],
                    defects[pair + 1][n]
                ),
            );
        }
    }
    cr.finish();
}

#[test]
fn criterion_7_expansion_structure() {
    let mut cr = Criterion::new("criterion 7: expansion structure");
    let c = consts();
    let (_, analysis) = egg_band();
    let hs: Vec<f64> = (4..=12).map(|k| 2.0f64.powi(-k)).collect();
    let mut t1 = Vec::new();
    let mut t43 = Vec::new();
    let mut t53 = Vec::new();
    for &h in &hs {
        let p = predict_eigenvalue(2, h, c, analysis).unwrap();
        t1.push(p.term_h);
        t43.push(p.term_h43);
        t53.push(p.term_h53);
    }
    for (name, vals, expected) in [
        ("h-slope", &t1, 1.0),
        ("h^(4/3)-slope", &t43, 4.0 / 3.0),
        ("h^(5/3)-slope", &t53, 5.0 / 3.0),
    ] {
        let slope = log_log_slope(&hs, vals);
        cr.check(
            name,
            (slope - expected).abs() < 1e-10,
            format!("slope {slope} vs {expected}"),
        );
    }
    // Gap/h^(5/3) independent of n and h to machine precision.
    let mut worst = 0.0f64;
    for &h in &hs {
        for n in 1..=4 {
            let p = predict_eigenvalue(n, h, c, analysis).unwrap();
            worst = worst
                .max((p.gap_to_next / h.powf(5.0 / 3.0) - analysis.harmonic_gap_coefficient).abs());
        }
    }
    cr.check(
        "gap/h^(5/3) constant",
        worst < 1e-13,
        format!("max deviation {worst:.3e}"),
    );
    cr.finish();
}

#[test]
fn criterion_8_eigenfunction_profiles() {
    let mut cr = Criterion::new("criterion 8: eigenfunction profiles");
    let c = consts();
    let (band, analysis) = egg_band();
    let h = 0.01;
    for n in 1..=6usize {
        let grids = ProfileGrids::adapted(n, h, band, analysis);
        let p = eigenfunction_profile(n, h, c, band, analysis, &grids).unwrap();
        for (name, grid, factor) in [
            ("t", &p.t_samples, &p.t_factor),
            ("r", &p.r_samples, &p.r_factor),
            ("s", &p.s_samples, &p.s_factor),
        ] {
            let step = grid[1] - grid[0];
            let norm: f64 = factor.iter().map(|v| v * v).sum::<f64>() * step;
            cr.check(
                "factor normalization",
                (norm - 1.0).abs() < 1e-6,
                format!("n = {n}, {name}-factor norm deviation {:.3e}", norm - 1.0),
            );
        }
        let changes = p.s_factor_sign_changes();
        cr.check(
            "Hermite node count",
            changes == n - 1,
            format!("n = {n}: {changes} sign changes, expected {}", n - 1),
        );
    }
    // Second moment in t scales as h across a 4× change.
    let g1 = ProfileGrids::adapted(1, h, band, analysis);
    let p1 = eigenfunction_profile(1, h, c, band, analysis, &g1).unwrap();
    let g2 = ProfileGrids::adapted(1, h / 4.0, band, analysis);
    let p2 = eigenfunction_profile(1, h / 4.0, c, band, analysis, &g2).unwrap();
    let ratio = p1.t_second_moment() / p2.t_second_moment();
    cr.check(
        "t second moment ∝ h (4× change within 2% per factor 2 of width)",
        (ratio / 4.0 - 1.0).abs() < 0.04,
        format!("⟨t²⟩ ratio {ratio} vs 4"),
    );
    cr.finish();
}

//! Oracle tests for the band function, the direct reduced operator and
//! the quantization, beyond the per-module unit tests.

use magcontour_core::model_operators::{default_model_constants, ModelConstants};
use magcontour_core::reduced_operators::*;
use magcontour_core::surface_geometry::{gamma_frame, GammaFrame, Surface};
use std::sync::OnceLock;

fn consts() -> &'static ModelConstants {
    static CONSTS: OnceLock<ModelConstants> = OnceLock::new();
    CONSTS.get_or_init(|| default_model_constants().expect("model constants"))
}

fn ellipsoid_frame() -> &'static GammaFrame {
    static FRAME: OnceLock<GammaFrame> = OnceLock::new();
    FRAME.get_or_init(|| {
        let surface = Surface::ellipsoid(2.0, 1.0, 1.0).unwrap();
        gamma_frame(&surface, 256, consts()).unwrap()
    })
}

#[test]
fn band_at_pointwise_minimizer_is_k_theta() {
    let band = Band::new(ellipsoid_frame(), consts()).unwrap();
    for s in [0.3, 2.0, 5.1] {
        let sigma = band.sigma_pointwise_min(s);
        let value = band.value(s, sigma).unwrap();
        let expected = band.k_coeff(s) * consts().theta0_m2;
        assert!(
            (value - expected).abs() < 1e-8,
            "s = {s}: {value} vs {expected}"
        );
        // Strict convexity in σ near the pointwise minimizer.
        let h = 0.05;
        let vm = band.value(s, sigma - h).unwrap();
        let vp = band.value(s, sigma + h).unwrap();
        assert!(vm > value && vp > value);
    }
}

#[test]
fn ellipsoid_band_minimum_closed_forms() {
    let band = Band::new(ellipsoid_frame(), consts()).unwrap();
    let analysis = minimize_band(&band).unwrap();
    // s_min coincides with the argmin of K.
    let quarter = band.period() / 4.0;
    let dist = (analysis.s_min - quarter)
        .abs()
        .min((analysis.s_min - 3.0 * quarter).abs());
    assert!(dist < 1e-6, "s_min = {}", analysis.s_min);
    // Closed forms (also enforced inside minimize_band).
    let sigma_closed = band.sigma_pointwise_min(analysis.s_min);
    assert!((analysis.sigma_min - sigma_closed).abs() < 1e-7);
    assert!((analysis.b_min - analysis.k_min * consts().theta0_m2).abs() < 1e-8);
    // Hessian: positive definite, near-vanishing mixed partial for the
    // planar contour (K' and μ' both vanish at the minimizer).
    assert!(analysis.hess[0][0] > 0.0 && analysis.det_hess > 0.0);
    let mixed_rel = analysis.hess[0][1].abs() / (analysis.hess[0][0] * analysis.hess[1][1]).sqrt();
    assert!(mixed_rel < 1e-5, "mixed partial ratio {mixed_rel}");
}

#[test]
fn band_hessian_matches_chain_rule_oracle() {
    // At the minimizer (K' = 0, μ' = 0, E ≡ 1 and β' = 0 for a planar
    // contour) the chain rule gives
    //   b_σσ = K μ'' g²,  b_ss = Θ₀^[2] K'',  b_sσ = 0,
    // with g = α₀^(1/3)/β^(1/3). K'' comes from spectral differentiation
    // of the frame samples — a route independent of the FD Hessian.
    let frame = ellipsoid_frame();
    let band = Band::new(frame, consts()).unwrap();
    let analysis = minimize_band(&band).unwrap();
    let c = consts();
    let g = c.alpha0.cbrt() / band.beta(analysis.s_min).cbrt();
    let sigsig_oracle = analysis.k_min * c.curv_m2 * g * g;
    assert!(
        (analysis.hess[1][1] - sigsig_oracle).abs() < 1e-4 * sigsig_oracle,
        "b_σσ {} vs oracle {sigsig_oracle}",
        analysis.hess[1][1]
    );
    let ks: Vec<f64> = frame.samples.iter().map(|s| s.k_coeff).collect();
    let d1 = magcontour_core::fourier::periodic_derivative(&ks, frame.total_length());
    let d2 = magcontour_core::fourier::periodic_derivative(&d1, frame.total_length());
    // Nearest sample to s_min.
    let ds = frame.spacing();
    let j = (analysis.s_min / ds).round() as usize % frame.num_samples();
    let ss_oracle = c.theta0_m2 * d2[j];
    assert!(
        (analysis.hess[0][0] - ss_oracle).abs() < 1e-3 * ss_oracle.abs(),
        "b_ss {} vs oracle {ss_oracle}",
        analysis.hess[0][0]
    );
}

#[test]
fn direct_reduced_operator_reproduces_band_on_grid() {
    let band = Band::new(ellipsoid_frame(), consts()).unwrap();
    let analysis = minimize_band(&band).unwrap();
    let mut worst = 0.0f64;
    for i in 0..3 {
        let s = analysis.s_min + (i as f64 - 1.0) * 0.3;
        for j in 0..3 {
            let sigma = analysis.sigma_min * (0.8 + 0.2 * j as f64);
            let direct = band.reduced_ground_energy_direct(s, sigma, 2000).unwrap();
            let formula = band.value_direct(s, sigma).unwrap();
            worst = worst.max(((direct - formula) / formula).abs());
        }
    }
    assert!(worst < 1e-6, "worst relative deviation {worst:e}");
}

#[test]
fn direct_reduced_operator_montgomery_normalization() {
    // E = β = 1 and the σ hitting ξ₀^[2] reduce the operator to the scaled
    // Montgomery minimum: ground energy α₀^(1/3) Θ₀^[2].
    let c = consts();
    let sigma = c.xi0_m2 / c.alpha0.cbrt();
    let energy = direct_ground_energy(1.0, 1.0, c.alpha0, sigma, 2000).unwrap();
    let expected = c.alpha0.cbrt() * c.theta0_m2;
    assert!(
        (energy - expected).abs() < 1e-8,
        "{energy} vs {expected}"
    );
}

#[test]
fn ellipsoid_quantization_pairs_up_in_the_double_well() {
    // The triaxial ellipsoid has two symmetric wells: the low quantized
    // levels come in near-degenerate pairs, with the pair mean tracking
    // the single-well harmonic level and the inter-pair spacing ε√det.
    let band = Band::new(ellipsoid_frame(), consts()).unwrap();
    let analysis = minimize_band(&band).unwrap();
    let eps = 0.02;
    let q = band.quantize(eps, 512).unwrap();
    let omega = analysis.harmonic_gap_coefficient;
    let split = q.eigenvalues[1] - q.eigenvalues[0];
    let gap = q.eigenvalues[2] - q.eigenvalues[1];
    assert!(
        split < 0.02 * gap,
        "tunneling split {split} not small against the level gap {gap}"
    );
    let first = 0.5 * (q.eigenvalues[0] + q.eigenvalues[1]);
    let level1 = harmonic_levels(&analysis, eps, 1);
    assert!(
        ((first - level1) / (level1 - analysis.b_min)).abs() < 0.1,
        "pair mean {first} vs harmonic level {level1}"
    );
}

#[test]
fn egg_quantization_matches_harmonic_levels_within_ten_percent() {
    let c = consts();
    let egg = Surface::egg(1.0, 1.5, 1.0, 0.25).unwrap();
    let frame = gamma_frame(&egg, 256, c).unwrap();
    let (band, analysis) = band_analysis(&frame, c).unwrap();
    let eps = 0.02;
    let q = band.quantize(eps, 512).unwrap();
    let lam1 = q.eigenvalues[0];
    let target = harmonic_levels(&analysis, eps, 1);
    assert!(
        ((lam1 - analysis.b_min) / (target - analysis.b_min) - 1.0).abs() < 0.1,
        "λ₁ {lam1} vs harmonic {target}"
    );
    // Error halves as ε halves.
    let q2 = band.quantize(0.5 * eps, 512).unwrap();
    let d1 = (lam1 - target).abs() / eps;
    let d2 = (q2.eigenvalues[0] - harmonic_levels(&analysis, 0.5 * eps, 1)).abs() / (0.5 * eps);
    let ratio = d1 / d2;
    assert!(
        (1.5..=2.5).contains(&ratio),
        "defect ratio {ratio} (d1 = {d1:e}, d2 = {d2:e})"
    );
}

#[test]
fn band_minimum_margin_reported_on_unique_well() {
    let c = consts();
    let egg = Surface::egg(1.0, 1.5, 1.0, 0.25).unwrap();
    let frame = gamma_frame(&egg, 256, c).unwrap();
    let (_, analysis) = band_analysis(&frame, c).unwrap();
    assert!(analysis.assumptions.k_unique_nondegenerate_min);
    // The margin to the second-best local minimum of K translates to a
    // strictly positive band margin Θ₀^[2]·ΔK.
    assert!(analysis.assumptions.second_minimum_margin * c.theta0_m2 > 0.05);
}

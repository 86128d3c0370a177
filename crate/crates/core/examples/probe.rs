use magcontour_core::asymptotics::*;
use magcontour_core::model_operators::*;
use magcontour_core::reduced_operators::*;
use magcontour_core::surface_geometry::*;

fn main() {
    let consts = default_model_constants().unwrap();
    let egg = Surface::egg(1.0, 1.5, 1.0, 0.25).unwrap();
    let frame = gamma_frame(&egg, 256, &consts).unwrap();
    let (band, analysis) = band_analysis(&frame, &consts).unwrap();

    for n in [1usize, 3, 6] {
        let h = 0.01;
        let grids = ProfileGrids::adapted(n, h, &band, &analysis);
        let p = eigenfunction_profile(n, h, &consts, &band, &analysis, &grids).unwrap();
        println!("n={n}: sign changes = {} (expect {}), w_bracket={:.6} w_full={:.6} reldiff={:.4}",
            p.s_factor_sign_changes(), n - 1, p.w_scale_bracket, p.w_scale_full_hessian, p.w_scale_relative_difference());
        // factor normalization check
        let dt = p.t_samples[1] - p.t_samples[0];
        let nt: f64 = p.t_factor.iter().map(|v| v*v).sum::<f64>() * dt;
        println!("   t-factor norm: {:.12}; t 2nd moment: {:.9}", nt, p.t_second_moment());
    }
    // moment scaling h vs h/4
    let h = 0.01;
    let g1 = ProfileGrids::adapted(1, h, &band, &analysis);
    let p1 = eigenfunction_profile(1, h, &consts, &band, &analysis, &g1).unwrap();
    let g2 = ProfileGrids::adapted(1, h / 4.0, &band, &analysis);
    let p2 = eigenfunction_profile(1, h / 4.0, &consts, &band, &analysis, &g2).unwrap();
    println!("t second moment ratio (h vs h/4): {} (expect 4)", p1.t_second_moment() / p2.t_second_moment());

    // predictions on egg
    let pred = predict_eigenvalue(1, 0.01, &consts, &analysis).unwrap();
    println!("prediction: {pred:?}");
}

//! fPCA of one- and two-peak speed curves: variance explained, PC1 scores and
//! the mean +/- k SD perturbation curves used to read a component.

use diphthong_dynamics::fpca::{fpca_fit, fpca_reconstruct, perturbation_curves, DEFAULT_PERTURBATION_MULTIPLIERS};

fn bump(t: f64, at: f64, width: f64) -> f64 {
    (-((t - at) / width).powi(2)).exp()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = 101;
    let curves: Vec<Vec<f64>> = (0..20)
        .map(|i| {
            let late = i as f64 / 19.0;
            (0..grid)
                .map(|g| {
                    let t = g as f64 / (grid - 1) as f64;
                    bump(t, 0.15, 0.08) + late * bump(t, 0.6, 0.1)
                })
                .collect()
        })
        .collect();

    let model = fpca_fit(&curves)?;
    println!(
        "components: {}, retained for 99%: {}, PC1 explains {:.1}%",
        model.n_components(),
        model.n_retained,
        100.0 * model.variance_explained[0]
    );
    println!(
        "PC1 scores: {:?}",
        model
            .scores
            .iter()
            .map(|s| (s[0] * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );

    let perturbed = perturbation_curves(&model, 0, &DEFAULT_PERTURBATION_MULTIPLIERS)?;
    for (m, curve) in DEFAULT_PERTURBATION_MULTIPLIERS.iter().zip(&perturbed) {
        println!("mean {m:+} sd: value at t = 0.6 is {:.3}", curve[60]);
    }

    let rebuilt = fpca_reconstruct(&model, &model.scores[7], model.n_components())?;
    let err = rebuilt
        .iter()
        .zip(&curves[7])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("full reconstruction max error: {err:.2e}");
    Ok(())
}

//! Recovers the cubic stiffness of a reference simulation from its
//! time-to-peak-speed ratio.

use diphthong_dynamics::dynamics::{
    default_d_upper, fit_cubic_d, simulate_score, Activation, Gesture, GestureParams, GestureScore, Role,
    SimulationConfig, SpeedCurve,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let score = GestureScore::new(vec![Gesture::tbcd(
        GestureParams::linear(0.9)?,
        Activation::new(0.0, 0.25)?,
        Role::Single,
    )]);
    let cfg = SimulationConfig::default();
    let bounds = (0.0, default_d_upper(2000.0));

    for d_true in [0.0, 400.0, 900.0, 1500.0] {
        let reference = simulate_score(&score.with_cubic_d(d_true)?, &cfg)?;
        let curve = SpeedCurve::from(&reference);
        let d = fit_cubic_d(&curve, &score, &cfg, bounds)?;
        println!(
            "d* = {d_true:>6.1}  ratio {:.4}  fitted d = {d:.3}",
            curve.time_to_peak_ratio().unwrap_or(f64::NAN)
        );
    }

    let linear = SpeedCurve::from(&simulate_score(&score, &cfg)?);
    println!(
        "linear model ratio: {:.4}",
        linear.time_to_peak_ratio().unwrap_or(f64::NAN)
    );
    Ok(())
}

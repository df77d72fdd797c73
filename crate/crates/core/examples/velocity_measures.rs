//! Filtering, tangential speed and 10-90% displacement on a hand-built
//! two-sensor token.

use std::f64::consts::PI;

use diphthong_dynamics::kinematics::{
    count_velocity_peaks, euclidean_displacement, lowpass, resample_window, tangential_velocity, Channel, Trajectory,
    VowelToken, DEFAULT_PROMINENCE_FRAC,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fs = 250.0;
    let n = 150;
    // two smooth steps, the second larger, plus a 40 Hz buzz
    let step = |t: f64, at: f64, size: f64| size / (1.0 + (-(t - at) / 0.025).exp());
    let tdx: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            step(t, 0.12, -1.0) + step(t, 0.30, -3.0) + 0.05 * (2.0 * PI * 40.0 * t).sin()
        })
        .collect();
    let tdy: Vec<f64> = tdx.iter().map(|x| -0.5 * x).collect();

    let smooth_x = lowpass(&tdx, fs, 10.0)?;
    let smooth_y = lowpass(&tdy, fs, 10.0)?;
    let speed = tangential_velocity(&[&smooth_x, &smooth_y], fs)?;
    let raw_speed = tangential_velocity(&[&tdx, &tdy], fs)?;
    println!(
        "speed peaks: raw {}, filtered {}",
        count_velocity_peaks(&raw_speed, DEFAULT_PROMINENCE_FRAC),
        count_velocity_peaks(&speed, DEFAULT_PROMINENCE_FRAC)
    );

    let curve = resample_window(&speed, fs, 0.05, 0.45, 11)?;
    println!(
        "normalised speed: {:?}",
        curve.iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>()
    );

    let traj = Trajectory::new(
        fs,
        vec![
            Channel {
                name: "TDx".into(),
                samples: smooth_x,
            },
            Channel {
                name: "TDy".into(),
                samples: smooth_y,
            },
        ],
        "S1",
        "buy",
        "S1-buy-1",
    )?;
    let token = VowelToken::new(traj, 0.05, 0.45, 0.075)?;
    println!(
        "10-90% displacement: {:.3}",
        euclidean_displacement(&token, &["TDx", "TDy"], 0.1, 0.9)?
    );
    Ok(())
}

use std::f64::consts::TAU;

use diphthong_dynamics::coordination::{two_gesture_schedule, Relation};
use diphthong_dynamics::dynamics::{
    fit_cubic_d, simulate_score, Activation, Gesture, GestureParams, GestureScore, Role, SimulationConfig, SpeedCurve,
};
use diphthong_dynamics::kinematics::{derivative, lowpass, Butterworth};

fn single(target: f64, d: f64, seconds: f64) -> GestureScore {
    let params = GestureParams::new(target, 2000.0, d, 1.0).unwrap();
    GestureScore::new(vec![Gesture::tbcd(
        params,
        Activation::new(0.0, seconds).unwrap(),
        Role::Single,
    )])
}

fn diphthong(d: f64) -> GestureScore {
    let schedule = two_gesture_schedule(Relation::AntiPhase).unwrap();
    let nucleus = GestureParams::new(0.3, 2000.0, d, 1.0).unwrap();
    let offglide = GestureParams::new(0.9, 2000.0, d, 100.0).unwrap();
    GestureScore::new(vec![
        Gesture::tbcd(nucleus, schedule[0].activation, Role::Nucleus),
        Gesture::tbcd(offglide, schedule[1].activation, Role::Offglide),
    ])
}

#[test]
fn halving_the_step_barely_moves_the_trajectory() {
    for score in [single(0.7, 0.0, 0.3), single(0.7, 1000.0, 0.3), diphthong(1000.0)] {
        let coarse = simulate_score(&score, &SimulationConfig::default()).unwrap();
        let fine = simulate_score(
            &score,
            &SimulationConfig {
                dt: 0.0005,
                ..SimulationConfig::default()
            },
        )
        .unwrap();
        assert_eq!(fine.len(), 2 * coarse.len() - 1);
        let worst = coarse
            .position
            .iter()
            .enumerate()
            .map(|(i, p)| (p - fine.position[2 * i]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "max change {worst:e}");
    }
}

#[test]
fn single_gestures_approach_without_overshoot() {
    for d in [0.0, 500.0, 1000.0, 1700.0] {
        for (start, target) in [(0.0, 0.8), (1.0, 0.2), (0.4, 0.5)] {
            let out = simulate_score(
                &single(target, d, 0.5),
                &SimulationConfig {
                    initial_position: start,
                    ..SimulationConfig::default()
                },
            )
            .unwrap();
            let dir = (target - start).signum();
            assert!(out.position.windows(2).all(|w| (w[1] - w[0]) * dir >= -1e-15));
            assert!(out.position.iter().all(|p| (target - p) * dir >= -1e-12));
        }
    }
}

#[test]
fn state_is_frozen_after_the_last_activation() {
    let out = simulate_score(
        &single(0.6, 0.0, 0.05),
        &SimulationConfig {
            tail_after_last_offset: 0.1,
            ..SimulationConfig::default()
        },
    )
    .unwrap();
    let held = out.position[50];
    assert!(out.position[50..].iter().all(|p| *p == held));
    assert!(out.velocity[51..].iter().all(|v| *v == 0.0));
}

#[test]
fn cubic_coefficient_is_recovered_from_its_own_speed_curve() {
    let config = SimulationConfig::default();
    for d in [0.0, 300.0, 1000.0, 1600.0] {
        let reference = simulate_score(&diphthong(d), &config).unwrap();
        let fitted = fit_cubic_d(&SpeedCurve::from(&reference), &diphthong(0.0), &config, (0.0, 1800.0)).unwrap();
        assert!((fitted - d).abs() < 1e-2, "wanted {d}, got {fitted}");
    }
}

#[test]
fn slow_tones_pass_and_fast_tones_follow_the_design_response() {
    let fs = 250.0;
    let filt = Butterworth::lowpass(4, 10.0, fs).unwrap();
    let x: Vec<f64> = (0..2000).map(|i| (TAU * i as f64 / fs).sin()).collect();
    let y = filt.filtfilt(&x).unwrap();
    let amp = y[500..1500].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((amp - 1.0).abs() < 0.01, "1 Hz amplitude {amp}");

    for f in [5.0, 10.0, 20.0, 50.0] {
        let ratio = (std::f64::consts::PI * f / fs).tan() / (std::f64::consts::PI * 10.0 / fs).tan();
        let expected = 1.0 / (1.0 + ratio.powi(8)).sqrt();
        assert!((filt.magnitude(f) - expected).abs() < 1e-12 * (1.0 + 1.0 / expected));
    }
    assert!((filt.magnitude(10.0) - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn filtering_and_differentiation_commute_in_the_interior() {
    let fs = 250.0;
    let x: Vec<f64> = (0..1000)
        .map(|i| {
            let t = i as f64 / fs;
            (TAU * 1.5 * t).sin() + 0.3 * (TAU * 30.0 * t).cos() + t * t
        })
        .collect();
    let a = derivative(&lowpass(&x, fs, 10.0).unwrap(), fs).unwrap();
    let b = lowpass(&derivative(&x, fs).unwrap(), fs, 10.0).unwrap();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = a[200..800]
        .iter()
        .zip(&b[200..800])
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6 * scale, "interior mismatch {worst:e}");
}

#[test]
fn short_series_are_rejected_by_the_filter() {
    assert!(lowpass(&[1.0; 5], 250.0, 10.0).is_err());
    assert!(Butterworth::lowpass(4, 130.0, 250.0).is_err());
}

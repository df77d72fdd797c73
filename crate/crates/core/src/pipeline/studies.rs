//! Simulation studies of one- and two-target vowels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Distribution;
use crate::coordination::{two_gesture_schedule, Relation};
use crate::dynamics::{
    simulate_score, Activation, Gesture, GestureParams, GestureScore, Role, SimOutput, SimulationConfig,
    DEFAULT_ACTIVATION_S, DEFAULT_STIFFNESS,
};
use crate::error::{Error, Result};
use crate::kinematics::{velocity_minima, velocity_peaks, Extremum, DEFAULT_PROMINENCE_FRAC};

/// Cubic stiffness used by the studies unless overridden.
pub const STUDY_CUBIC_D: f64 = 1000.0;
/// Offglide blending strength relative to a nucleus strength of 1.
pub const OFFGLIDE_STRENGTH: f64 = 100.0;
pub const SWEEP_NUCLEI: [f64; 4] = [0.9, 0.8, 0.7, 0.6];
pub const SWEEP_OFFGLIDE: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyParams {
    pub stiffness: f64,
    pub cubic_d: f64,
    pub offglide_strength: f64,
    pub prominence_frac: f64,
    pub sim: SimulationConfig,
}

impl Default for StudyParams {
    fn default() -> Self {
        StudyParams {
            stiffness: DEFAULT_STIFFNESS,
            cubic_d: STUDY_CUBIC_D,
            offglide_strength: OFFGLIDE_STRENGTH,
            prominence_frac: DEFAULT_PROMINENCE_FRAC,
            sim: SimulationConfig::default(),
        }
    }
}

impl StudyParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.prominence_frac) {
            return Err(Error::param("prominence_frac", "must be in [0, 1]"));
        }
        self.sim.validate()?;
        GestureParams::new(0.0, self.stiffness, self.cubic_d, self.offglide_strength).map(|_| ())
    }

    fn gesture(&self, target: f64, strength: f64, activation: Activation, role: Role) -> Result<Gesture> {
        let params = GestureParams::new(target, self.stiffness, self.cubic_d, strength)?;
        Ok(Gesture::tbcd(params, activation, role))
    }

    fn single(&self, target: f64, duration_s: f64) -> Result<GestureScore> {
        Ok(GestureScore::new(vec![self.gesture(
            target,
            1.0,
            Activation::new(0.0, duration_s)?,
            Role::Single,
        )?]))
    }

    /// Nucleus and offglide coupled anti-phase.
    pub fn two_target(&self, nucleus: f64, offglide: f64) -> Result<GestureScore> {
        let schedule = two_gesture_schedule(Relation::AntiPhase)?;
        let mut gestures = Vec::with_capacity(2);
        for slot in schedule {
            gestures.push(match slot.gesture {
                0 => self.gesture(nucleus, 1.0, slot.activation, Role::Nucleus)?,
                _ => self.gesture(offglide, self.offglide_strength, slot.activation, Role::Offglide)?,
            });
        }
        Ok(GestureScore::new(gestures))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRun {
    pub label: String,
    pub item: String,
    pub score: GestureScore,
    pub config: SimulationConfig,
    pub output: SimOutput,
    pub duration_s: f64,
    pub peaks: Vec<Extremum>,
    pub minima: Vec<Extremum>,
    /// Height of the second speed peak, if there is one.
    pub second_peak_height: Option<f64>,
}

impl StudyRun {
    pub fn peak_count(&self) -> usize {
        self.peaks.len()
    }

    pub fn minima_count(&self) -> usize {
        self.minima.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationStudy {
    pub name: String,
    pub params: StudyParams,
    pub runs: Vec<StudyRun>,
}

impl SimulationStudy {
    pub fn run(&self, label: &str) -> Option<&StudyRun> {
        self.runs.iter().find(|r| r.label == label)
    }

    /// Duration summary by item over all runs.
    pub fn durations(&self) -> Result<BTreeMap<String, DurationSummary>> {
        duration_table(self.runs.iter().map(|r| (r.item.as_str(), r.duration_s)))
    }
}

fn run(label: &str, item: &str, score: GestureScore, params: &StudyParams) -> Result<StudyRun> {
    let output = simulate_score(&score, &params.sim)?;
    let speed = output.speed();
    let peaks = velocity_peaks(&speed, params.prominence_frac);
    let minima = velocity_minima(&speed, params.prominence_frac);
    Ok(StudyRun {
        label: label.to_string(),
        item: item.to_string(),
        duration_s: output.driven_duration_s(),
        second_peak_height: peaks.get(1).map(|p| p.value),
        score,
        config: params.sim,
        output,
        peaks,
        minima,
    })
}

/// Three accounts of *bar* versus *buy*:
///
/// - `a`: *bar* one 250 ms target at 0.3, *buy* nucleus 0.3 + offglide 0.9;
/// - `b`: *bar* one long 375 ms target at 0.3;
/// - `c`: *bar* two identical targets at 0.3, *buy* as in `a`.
///
/// Run labels are `<variant>-<item>`.
pub fn run_fig14_study(params: &StudyParams) -> Result<SimulationStudy> {
    params.validate()?;
    let buy = params.two_target(0.3, 0.9)?;
    let runs = vec![
        run("a-bar", "bar", params.single(0.3, DEFAULT_ACTIVATION_S)?, params)?,
        run("a-buy", "buy", buy.clone(), params)?,
        run("b-bar", "bar", params.single(0.3, 1.5 * DEFAULT_ACTIVATION_S)?, params)?,
        run("c-bar", "bar", params.two_target(0.3, 0.3)?, params)?,
        run("c-buy", "buy", buy, params)?,
    ];
    Ok(SimulationStudy {
        name: "fig14-variants".into(),
        params: *params,
        runs,
    })
}

/// Nucleus targets 0.9, 0.8, 0.7, 0.6 against a fixed 0.9 offglide. Run
/// labels are `nucleus-<target>`.
pub fn run_fig16_sweep(params: &StudyParams) -> Result<SimulationStudy> {
    params.validate()?;
    let runs = SWEEP_NUCLEI
        .iter()
        .map(|&nucleus| {
            let label = format!("nucleus-{nucleus:.1}");
            run(&label, &label, params.two_target(nucleus, SWEEP_OFFGLIDE)?, params)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationStudy {
        name: "fig16-sweep".into(),
        params: *params,
        runs,
    })
}

pub type DurationSummary = Distribution;

/// Groups `(item, duration)` pairs by item.
pub fn duration_table<'a>(
    durations: impl IntoIterator<Item = (&'a str, f64)>,
) -> Result<BTreeMap<String, DurationSummary>> {
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (item, d) in durations {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::param(
                "duration_s",
                format!("{d} for `{item}` is not a valid duration"),
            ));
        }
        groups.entry(item.to_string()).or_default().push(d);
    }
    if groups.is_empty() {
        return Err(Error::EmptyGroup("no durations".into()));
    }
    groups
        .into_iter()
        .map(|(item, v)| {
            let s = Distribution::of(&v).ok_or_else(|| Error::EmptyGroup(item.clone()))?;
            Ok((item, s))
        })
        .collect()
}

//! Gesture timing from coupled planning oscillators.
//!
//! Each gesture owns a phase oscillator `theta_i` with natural frequency
//! `f_i`; pairs are coupled through `sin(theta_i - theta_j)`. The relative
//! phases settle to 0 for in-phase pairs and to pi for anti-phase pairs, and
//! a settled relative phase `phi` at frequency `f` becomes an onset lag of
//! `phi / (2 pi f)`.
//!
//! Coupling strengths are stored with positive values meaning in-phase. The
//! printed form of the phase equation is only stable under the opposite sign,
//! so integration uses `theta_i' = 2 pi f_i - sum_j C_ij sin(theta_i - theta_j)`,
//! which makes the declared relation the attracting one. The settled phase is
//! checked against the declared relation afterwards.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Activation, DEFAULT_ACTIVATION_S};
use crate::error::{Error, Result};

pub const DEFAULT_FREQUENCY_HZ: f64 = 4.0;
pub const DEFAULT_COUPLING: f64 = 2.0;
pub const DEFAULT_DT: f64 = 0.001;
pub const DEFAULT_MAX_TIME_S: f64 = 10.0;
pub const DEFAULT_TOL_RAD: f64 = 1e-6;
/// Acceptance window for a settled phase against its declared relation.
pub const RELATION_TOL_RAD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    InPhase,
    AntiPhase,
    None,
}

impl Relation {
    /// Stable relative phase, if the relation declares one.
    pub fn target_phase(self) -> Option<f64> {
        match self {
            Relation::InPhase => Some(0.0),
            Relation::AntiPhase => Some(PI),
            Relation::None => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Relation::InPhase => "in-phase",
            Relation::AntiPhase => "anti-phase",
            Relation::None => "none",
        }
    }
}

/// One coupled pair as it appears in a score document.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPair {
    pub i: usize,
    pub j: usize,
    pub relation: Relation,
    /// Magnitude; the sign comes from `relation`. Defaults to 2.0.
    #[serde(default)]
    pub strength: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    pub pairs: Vec<CouplingPair>,
    #[serde(default = "default_frequency")]
    pub frequency_hz: f64,
}

fn default_frequency() -> f64 {
    DEFAULT_FREQUENCY_HZ
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingGraph {
    frequency_hz: Vec<f64>,
    coupling: Vec<Vec<f64>>,
    relations: Vec<Vec<Relation>>,
}

impl CouplingGraph {
    /// Uncoupled oscillators, all at `frequency_hz`.
    pub fn new(n_oscillators: usize, frequency_hz: f64) -> Result<Self> {
        if n_oscillators == 0 {
            return Err(Error::param("n_oscillators", "need at least one oscillator"));
        }
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::param("frequency_hz", format!("{frequency_hz} must be positive")));
        }
        Ok(CouplingGraph {
            frequency_hz: vec![frequency_hz; n_oscillators],
            coupling: vec![vec![0.0; n_oscillators]; n_oscillators],
            relations: vec![vec![Relation::None; n_oscillators]; n_oscillators],
        })
    }

    /// Declares a symmetric relation with the given coupling magnitude.
    pub fn couple(mut self, i: usize, j: usize, relation: Relation, strength: f64) -> Result<Self> {
        let n = self.n_oscillators();
        if i >= n || j >= n || i == j {
            return Err(Error::param("pair", format!("({i}, {j}) invalid for {n} oscillators")));
        }
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::param("strength", format!("{strength} must be >= 0")));
        }
        let signed = match relation {
            Relation::InPhase => strength,
            Relation::AntiPhase => -strength,
            Relation::None => 0.0,
        };
        self.coupling[i][j] = signed;
        self.coupling[j][i] = signed;
        self.relations[i][j] = relation;
        self.relations[j][i] = relation;
        Ok(self)
    }

    pub fn with_frequency(mut self, oscillator: usize, frequency_hz: f64) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::param("frequency_hz", format!("{frequency_hz} must be positive")));
        }
        *self
            .frequency_hz
            .get_mut(oscillator)
            .ok_or_else(|| Error::param("oscillator", format!("{oscillator} out of range")))? = frequency_hz;
        Ok(self)
    }

    pub fn from_spec(n_oscillators: usize, spec: &CouplingSpec) -> Result<Self> {
        spec.pairs
            .iter()
            .try_fold(CouplingGraph::new(n_oscillators, spec.frequency_hz)?, |g, p| {
                g.couple(p.i, p.j, p.relation, p.strength.unwrap_or(DEFAULT_COUPLING))
            })
    }

    /// Two oscillators at 4 Hz with the default coupling magnitude.
    pub fn pair(relation: Relation) -> Self {
        CouplingGraph::new(2, DEFAULT_FREQUENCY_HZ)
            .and_then(|g| g.couple(0, 1, relation, DEFAULT_COUPLING))
            .expect("default pair is valid")
    }

    pub fn n_oscillators(&self) -> usize {
        self.frequency_hz.len()
    }

    pub fn frequency_hz(&self) -> &[f64] {
        &self.frequency_hz
    }

    /// Signed coupling, positive meaning in-phase.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.coupling[i][j]
    }

    pub fn relation(&self, i: usize, j: usize) -> Relation {
        self.relations[i][j]
    }

    fn rates(&self, theta: &[f64], out: &mut [f64]) {
        for (i, rate) in out.iter_mut().enumerate() {
            let pull: f64 = (0..theta.len())
                .filter(|&j| j != i)
                .map(|j| self.coupling[i][j] * (theta[i] - theta[j]).sin())
                .sum();
            *rate = TAU * self.frequency_hz[i] - pull;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPhase {
    pub i: usize,
    pub j: usize,
    /// `theta_i - theta_j`, wrapped to `[0, 2 pi)`.
    pub settled_phase_rad: f64,
    /// How long gesture `j` starts after gesture `i`.
    pub lag_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSolution {
    pub pairs: Vec<PairPhase>,
    pub converged: bool,
    pub iterations: usize,
    pub n_oscillators: usize,
}

impl PhaseSolution {
    pub fn pair(&self, i: usize, j: usize) -> Option<&PairPhase> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    /// Onset lag of each gesture relative to gesture 0.
    pub fn lags_from_first(&self) -> Vec<f64> {
        let mut lags = vec![0.0; self.n_oscillators];
        for p in self.pairs.iter().filter(|p| p.i == 0) {
            lags[p.j] = p.lag_s;
        }
        lags
    }
}

pub fn wrap_phase(phase: f64) -> f64 {
    let w = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Circular distance between two angles, in `[0, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// Converts a settled relative phase to an onset lag. Phases are read in the
/// window `[-pi/2, 3 pi/2)`, so an in-phase pair approached from either side
/// gives a lag near zero and an anti-phase pair always gives a positive
/// half-period lag.
pub fn phase_to_lag(phase_rad: f64, frequency_hz: f64) -> f64 {
    let mut p = wrap_phase(phase_rad);
    if p >= 1.5 * PI {
        p -= TAU;
    }
    p / (TAU * frequency_hz)
}

fn rk4_step(graph: &CouplingGraph, theta: &mut [f64], dt: f64, scratch: &mut [Vec<f64>; 5]) {
    let n = theta.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    graph.rates(theta, k1);
    for i in 0..n {
        tmp[i] = theta[i] + 0.5 * dt * k1[i];
    }
    graph.rates(tmp, k2);
    for i in 0..n {
        tmp[i] = theta[i] + 0.5 * dt * k2[i];
    }
    graph.rates(tmp, k3);
    for i in 0..n {
        tmp[i] = theta[i] + dt * k3[i];
    }
    graph.rates(tmp, k4);
    for i in 0..n {
        theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

fn relative_phases(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(theta[i] - theta[j]);
        }
    }
    out
}

/// Integrates the oscillators with RK4 until every pairwise relative phase
/// moves by less than `tol_rad` over one period of the slowest oscillator,
/// or `max_time_s` elapses. An unconverged solution is returned flagged.
pub fn integrate_oscillators(
    graph: &CouplingGraph,
    initial_phases_rad: &[f64],
    dt: f64,
    max_time_s: f64,
    tol_rad: f64,
) -> Result<PhaseSolution> {
    let n = graph.n_oscillators();
    if initial_phases_rad.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: initial_phases_rad.len(),
        });
    }
    if initial_phases_rad.iter().any(|p| !p.is_finite()) {
        return Err(Error::param("initial_phases_rad", "must be finite"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    if !(tol_rad.is_finite() && tol_rad > 0.0) {
        return Err(Error::param("tol_rad", format!("{tol_rad} must be positive")));
    }
    if !(max_time_s.is_finite() && max_time_s > 0.0) {
        return Err(Error::param("max_time_s", format!("{max_time_s} must be positive")));
    }

    let slowest = graph.frequency_hz.iter().copied().fold(f64::INFINITY, f64::min);
    let period_steps = ((1.0 / slowest) / dt).round().max(1.0) as usize;
    let max_steps = (max_time_s / dt).round() as usize;

    let mut theta = initial_phases_rad.to_vec();
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let mut previous = relative_phases(&theta);
    let mut converged = n == 1;
    let mut iterations = 0;
    while !converged && iterations < max_steps {
        rk4_step(graph, &mut theta, dt, &mut scratch);
        iterations += 1;
        if iterations % period_steps == 0 {
            let current = relative_phases(&theta);
            converged = current
                .iter()
                .zip(&previous)
                .all(|(&c, &p)| phase_distance(c, p) < tol_rad);
            previous = current;
        }
    }

    let mut pairs = Vec::with_capacity(previous.len());
    for i in 0..n {
        for j in (i + 1)..n {
            let settled = wrap_phase(theta[i] - theta[j]);
            let freq = 0.5 * (graph.frequency_hz[i] + graph.frequency_hz[j]);
            pairs.push(PairPhase {
                i,
                j,
                settled_phase_rad: settled,
                lag_s: phase_to_lag(settled, freq),
            });
        }
    }
    Ok(PhaseSolution {
        pairs,
        converged,
        iterations,
        n_oscillators: n,
    })
}

/// Checks that every pair with a declared relation settled where declared.
pub fn check_relations(graph: &CouplingGraph, solution: &PhaseSolution) -> Result<()> {
    if !solution.converged {
        return Err(Error::Unconverged {
            max_time_s: solution.iterations as f64 * DEFAULT_DT,
        });
    }
    for p in &solution.pairs {
        let relation = graph.relation(p.i, p.j);
        if let Some(target) = relation.target_phase() {
            if phase_distance(p.settled_phase_rad, target) > RELATION_TOL_RAD {
                return Err(Error::WrongSettledPhase {
                    i: p.i,
                    j: p.j,
                    phase: p.settled_phase_rad,
                    declared: relation.name(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivationInterval {
    pub gesture: usize,
    pub activation: Activation,
}

/// Places gesture 0 at t = 0 and every other gesture at its lag behind
/// gesture 0. Negative lags are normalised away by shifting all onsets so
/// the earliest is 0; the result is ordered by onset.
pub fn schedule_from_phases(
    solution: &PhaseSolution,
    activation_duration_s: &[f64],
) -> Result<Vec<ActivationInterval>> {
    if !solution.converged {
        return Err(Error::Unconverged {
            max_time_s: solution.iterations as f64 * DEFAULT_DT,
        });
    }
    if activation_duration_s.len() != solution.n_oscillators {
        return Err(Error::LengthMismatch {
            expected: solution.n_oscillators,
            actual: activation_duration_s.len(),
        });
    }
    let lags = solution.lags_from_first();
    let earliest = lags.iter().copied().fold(0.0, f64::min);
    let mut out = lags
        .iter()
        .zip(activation_duration_s)
        .enumerate()
        .map(|(gesture, (&lag, &duration))| {
            Ok(ActivationInterval {
                gesture,
                activation: Activation::new(lag - earliest, duration)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| {
        a.activation
            .onset_s
            .total_cmp(&b.activation.onset_s)
            .then(a.gesture.cmp(&b.gesture))
    });
    Ok(out)
}

/// Default initial phases: gesture `i` starts `0.1 i` rad behind gesture 0.
pub fn default_initial_phases(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.1 * i as f64).collect()
}

/// Solves the graph with default integration settings, verifies the declared
/// relations and schedules every gesture for `durations_s`.
pub fn resolve_schedule(graph: &CouplingGraph, durations_s: &[f64]) -> Result<Vec<ActivationInterval>> {
    let solution = integrate_oscillators(
        graph,
        &default_initial_phases(graph.n_oscillators()),
        DEFAULT_DT,
        DEFAULT_MAX_TIME_S,
        DEFAULT_TOL_RAD,
    )?;
    check_relations(graph, &solution)?;
    schedule_from_phases(&solution, durations_s)
}

/// Schedule for two default-length gestures under the given relation.
pub fn two_gesture_schedule(relation: Relation) -> Result<Vec<ActivationInterval>> {
    resolve_schedule(&CouplingGraph::pair(relation), &[DEFAULT_ACTIVATION_S; 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(graph: &CouplingGraph, init: &[f64]) -> PhaseSolution {
        integrate_oscillators(graph, init, DEFAULT_DT, DEFAULT_MAX_TIME_S, DEFAULT_TOL_RAD).unwrap()
    }

    #[test]
    fn anti_phase_lag_is_half_period() {
        let sol = solve(&CouplingGraph::pair(Relation::AntiPhase), &[0.0, 0.1]);
        assert!(sol.converged);
        let p = sol.pair(0, 1).unwrap();
        assert!(phase_distance(p.settled_phase_rad, PI) < 1e-5);
        assert!((p.lag_s - 0.125).abs() < 1e-6);
    }

    #[test]
    fn in_phase_lag_is_zero() {
        let sol = solve(&CouplingGraph::pair(Relation::InPhase), &[0.0, 0.5]);
        assert!(sol.converged);
        let p = sol.pair(0, 1).unwrap();
        assert!(phase_distance(p.settled_phase_rad, 0.0) < 1e-5);
        assert!(p.lag_s.abs() < 1e-6);
    }

    #[test]
    fn uncoupled_keeps_initial_phase() {
        let g = CouplingGraph::new(2, 4.0).unwrap();
        let sol = solve(&g, &[0.0, 0.7]);
        assert!(sol.converged);
        let p = sol.pair(0, 1).unwrap();
        assert!(phase_distance(p.settled_phase_rad, -0.7) < 1e-9);
    }

    #[test]
    fn coupling_sign_follows_relation() {
        let g = CouplingGraph::new(3, 4.0)
            .unwrap()
            .couple(0, 1, Relation::InPhase, 1.5)
            .unwrap()
            .couple(1, 2, Relation::AntiPhase, 3.0)
            .unwrap();
        assert_eq!(g.coupling(0, 1), 1.5);
        assert_eq!(g.coupling(2, 1), -3.0);
        assert_eq!(g.coupling(0, 2), 0.0);
        assert_eq!(g.coupling(0, 0), 0.0);
    }

    #[test]
    fn unconverged_is_flagged() {
        let g = CouplingGraph::new(2, 4.0)
            .unwrap()
            .couple(0, 1, Relation::AntiPhase, 0.01)
            .unwrap();
        let sol = integrate_oscillators(&g, &[0.0, 0.1], 0.001, 1.0, 1e-9).unwrap();
        assert!(!sol.converged);
        assert!(check_relations(&g, &sol).is_err());
        assert!(schedule_from_phases(&sol, &[0.25, 0.25]).is_err());
    }

    #[test]
    fn schedule_single_gesture() {
        let g = CouplingGraph::new(1, 4.0).unwrap();
        let s = resolve_schedule(&g, &[0.25]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].activation.onset_s, 0.0);
        assert_eq!(s[0].activation.offset_s, 0.25);
    }

    #[test]
    fn schedule_anti_phase_pair() {
        let s = two_gesture_schedule(Relation::AntiPhase).unwrap();
        assert_eq!(s[0].gesture, 0);
        assert_eq!(s[0].activation.onset_s, 0.0);
        assert!((s[1].activation.onset_s - 0.125).abs() < 1e-6);
        assert!((s[1].activation.offset_s - 0.375).abs() < 1e-6);
    }

    #[test]
    fn schedule_in_phase_pair() {
        let s = two_gesture_schedule(Relation::InPhase).unwrap();
        for iv in &s {
            assert!(iv.activation.onset_s.abs() < 1e-6);
            assert!((iv.activation.offset_s - 0.25).abs() < 1e-6);
        }
    }

    #[test]
    fn negative_lag_is_reordered() {
        let sol = PhaseSolution {
            pairs: vec![PairPhase {
                i: 0,
                j: 1,
                settled_phase_rad: TAU - 0.5,
                lag_s: phase_to_lag(TAU - 0.5, 4.0),
            }],
            converged: true,
            iterations: 1,
            n_oscillators: 2,
        };
        let s = schedule_from_phases(&sol, &[0.25, 0.25]).unwrap();
        assert_eq!(s[0].gesture, 1);
        assert_eq!(s[0].activation.onset_s, 0.0);
        assert!((s[1].activation.onset_s - 0.5 / (TAU * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn doubling_frequency_halves_lag() {
        for phase in [0.3, PI, 4.0] {
            assert_eq!(phase_to_lag(phase, 8.0), phase_to_lag(phase, 4.0) / 2.0);
        }
    }

    #[test]
    fn spec_round_trips_into_graph() {
        let spec: CouplingSpec = serde_json::from_str(
            r#"{"pairs":[{"i":0,"j":1,"relation":"anti-phase","strength":3.0}],"frequency_hz":4.0}"#,
        )
        .unwrap();
        let g = CouplingGraph::from_spec(2, &spec).unwrap();
        assert_eq!(g.coupling(0, 1), -3.0);
        assert_eq!(g.relation(1, 0), Relation::AntiPhase);
    }
}

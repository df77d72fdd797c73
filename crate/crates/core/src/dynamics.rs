//! Task-dynamic simulation of a single tract variable.
//!
//! Each gesture drives the tract variable toward its target as a critically
//! damped mass-spring system with a softening cubic term:
//!
//! ```text
//! x'' + b x' + k x - d x^3 = 0,    x = position - target,    b = 2 sqrt(m k)
//! ```
//!
//! While several gestures overlap, the system is driven by their
//! blending-strength-weighted average parameters. Outside every activation
//! interval the state is frozen: position is held and velocity is zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass of the tract-variable point. Fixed.
pub const MASS: f64 = 1.0;
pub const DEFAULT_STIFFNESS: f64 = 2000.0;
pub const DEFAULT_ACTIVATION_S: f64 = 0.250;
pub const DEFAULT_DT: f64 = 0.001;
/// Golden-section termination width on `d`.
pub const FIT_TOLERANCE: f64 = 1e-6;
/// Fraction of total path length that marks the end of the movement when
/// computing the time-to-peak ratio.
pub const MOVEMENT_END_FRACTION: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GestureParams {
    target: f64,
    stiffness: f64,
    cubic_d: f64,
    blending_strength: f64,
}

impl GestureParams {
    pub fn new(target: f64, stiffness: f64, cubic_d: f64, blending_strength: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&target) {
            return Err(Error::param("target", format!("{target} is outside [0, 1]")));
        }
        if !(stiffness.is_finite() && stiffness > 0.0) {
            return Err(Error::param("k", format!("{stiffness} must be positive")));
        }
        if !(cubic_d.is_finite() && cubic_d >= 0.0) {
            return Err(Error::param("d", format!("{cubic_d} must be non-negative")));
        }
        if !(blending_strength.is_finite() && blending_strength > 0.0) {
            return Err(Error::param(
                "blending_strength",
                format!("{blending_strength} must be positive"),
            ));
        }
        Ok(GestureParams {
            target,
            stiffness,
            cubic_d,
            blending_strength,
        })
    }

    /// Target with default stiffness, no cubic term and unit blending strength.
    pub fn linear(target: f64) -> Result<Self> {
        Self::new(target, DEFAULT_STIFFNESS, 0.0, 1.0)
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    pub fn cubic_d(&self) -> f64 {
        self.cubic_d
    }

    pub fn blending_strength(&self) -> f64 {
        self.blending_strength
    }

    pub fn mass(&self) -> f64 {
        MASS
    }

    /// Critical damping, always derived from stiffness.
    pub fn damping(&self) -> f64 {
        2.0 * (MASS * self.stiffness).sqrt()
    }

    pub fn with_cubic_d(self, cubic_d: f64) -> Result<Self> {
        Self::new(self.target, self.stiffness, cubic_d, self.blending_strength)
    }

    pub fn with_blending_strength(self, strength: f64) -> Result<Self> {
        Self::new(self.target, self.stiffness, self.cubic_d, strength)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Nucleus,
    Offglide,
    Single,
}

/// Half-open activation interval `[onset_s, offset_s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Activation {
    pub onset_s: f64,
    pub offset_s: f64,
}

impl Activation {
    pub fn new(onset_s: f64, duration_s: f64) -> Result<Self> {
        if !(onset_s.is_finite() && onset_s >= 0.0) {
            return Err(Error::param("onset_s", format!("{onset_s} must be >= 0")));
        }
        if !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::param("duration_s", format!("{duration_s} must be positive")));
        }
        Ok(Activation {
            onset_s,
            offset_s: onset_s + duration_s,
        })
    }

    pub fn duration_s(&self) -> f64 {
        self.offset_s - self.onset_s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gesture {
    pub tract_variable: String,
    pub params: GestureParams,
    pub activation: Activation,
    pub role: Role,
}

impl Gesture {
    pub fn tbcd(params: GestureParams, activation: Activation, role: Role) -> Self {
        Gesture {
            tract_variable: "TBCD".to_string(),
            params,
            activation,
            role,
        }
    }
}

/// Gestures with resolved activation intervals.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GestureScore {
    pub gestures: Vec<Gesture>,
}

impl GestureScore {
    pub fn new(gestures: Vec<Gesture>) -> Self {
        GestureScore { gestures }
    }

    pub fn last_offset_s(&self) -> f64 {
        self.gestures.iter().map(|g| g.activation.offset_s).fold(0.0, f64::max)
    }

    /// Same score with every gesture's cubic term replaced.
    pub fn with_cubic_d(&self, cubic_d: f64) -> Result<Self> {
        let gestures = self
            .gestures
            .iter()
            .map(|g| {
                Ok(Gesture {
                    params: g.params.with_cubic_d(cubic_d)?,
                    ..g.clone()
                })
            })
            .collect::<Result<_>>()?;
        Ok(GestureScore { gestures })
    }

    /// Largest distance the tract variable can be from any effective target:
    /// the span of the initial position and all targets.
    pub fn max_displacement(&self, initial_position: f64) -> f64 {
        let (lo, hi) = self
            .gestures
            .iter()
            .map(|g| g.params.target)
            .fold((initial_position, initial_position), |(lo, hi), t| {
                (lo.min(t), hi.max(t))
            });
        hi - lo
    }

    fn check_guard(&self, initial_position: f64) -> Result<()> {
        let span = self.max_displacement(initial_position);
        for g in &self.gestures {
            let product = g.params.cubic_d * span * span;
            if product >= g.params.stiffness {
                return Err(Error::GuardViolation {
                    max_displacement: span,
                    product,
                    stiffness: g.params.stiffness,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dt: f64,
    pub initial_position: f64,
    pub initial_velocity: f64,
    pub tail_after_last_offset: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            dt: DEFAULT_DT,
            initial_position: 0.0,
            initial_velocity: 0.0,
            tail_after_last_offset: 0.0,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", format!("{} must be positive", self.dt)));
        }
        if !(0.0..=1.0).contains(&self.initial_position) {
            return Err(Error::param(
                "initial_position",
                format!("{} is outside [0, 1]", self.initial_position),
            ));
        }
        if !self.initial_velocity.is_finite() {
            return Err(Error::param("initial_velocity", "must be finite"));
        }
        if !(self.tail_after_last_offset.is_finite() && self.tail_after_last_offset >= 0.0) {
            return Err(Error::param("tail_after_last_offset", "must be >= 0"));
        }
        Ok(())
    }

    fn steps(&self, seconds: f64) -> usize {
        (seconds / self.dt).round() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State {
    pub position: f64,
    pub velocity: f64,
}

impl State {
    pub fn new(position: f64, velocity: f64) -> Self {
        State { position, velocity }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimOutput {
    pub time: Vec<f64>,
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Number of gestures driving the step that starts at each sample.
    pub active_count: Vec<usize>,
    pub dt: f64,
}

impl SimOutput {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn speed(&self) -> Vec<f64> {
        self.velocity.iter().map(|v| v.abs()).collect()
    }

    /// Total time during which at least one gesture is active.
    pub fn driven_duration_s(&self) -> f64 {
        self.active_count.iter().filter(|&&c| c > 0).count() as f64 * self.dt
    }
}

fn acceleration(displacement: f64, velocity: f64, p: &GestureParams) -> f64 {
    (-p.damping() * velocity - p.stiffness * displacement + p.cubic_d * displacement * displacement * displacement)
        / MASS
}

/// Advances the state by one classical fourth-order Runge-Kutta step toward
/// the effective target.
pub fn step_dynamics(state: State, effective: &GestureParams, dt: f64) -> Result<State> {
    step_at(state, effective, dt, 0.0)
}

fn step_at(state: State, p: &GestureParams, dt: f64, time_s: f64) -> Result<State> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let x0 = state.position - p.target;
    let v0 = state.velocity;

    let k1x = v0;
    let k1v = acceleration(x0, v0, p);
    let k2x = v0 + 0.5 * dt * k1v;
    let k2v = acceleration(x0 + 0.5 * dt * k1x, v0 + 0.5 * dt * k1v, p);
    let k3x = v0 + 0.5 * dt * k2v;
    let k3v = acceleration(x0 + 0.5 * dt * k2x, v0 + 0.5 * dt * k2v, p);
    let k4x = v0 + dt * k3v;
    let k4v = acceleration(x0 + dt * k3x, v0 + dt * k3v, p);

    let x = x0 + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    let v = v0 + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if !(x.is_finite() && v.is_finite()) {
        return Err(Error::Diverged { time_s: time_s + dt });
    }
    Ok(State::new(x + p.target, v))
}

/// Effective parameters of simultaneously active gestures: target, cubic
/// term and stiffness are blending-strength-weighted means, damping follows
/// from the blended stiffness.
pub fn blend_active(gestures: &[GestureParams]) -> Result<GestureParams> {
    match gestures {
        [] => Err(Error::NoActiveGesture),
        [single] => Ok(*single),
        _ => {
            // fixed summation order makes the result independent of input order
            let mut sorted = gestures.to_vec();
            sorted.sort_by(|a, b| {
                a.target
                    .total_cmp(&b.target)
                    .then(a.blending_strength.total_cmp(&b.blending_strength))
                    .then(a.stiffness.total_cmp(&b.stiffness))
                    .then(a.cubic_d.total_cmp(&b.cubic_d))
            });
            let total: f64 = sorted.iter().map(|g| g.blending_strength).sum();
            let mean =
                |f: fn(&GestureParams) -> f64| sorted.iter().map(|g| g.blending_strength / total * f(g)).sum::<f64>();
            Ok(GestureParams {
                target: mean(|g| g.target).clamp(0.0, 1.0),
                stiffness: mean(|g| g.stiffness),
                cubic_d: mean(|g| g.cubic_d),
                blending_strength: total,
            })
        }
    }
}

/// Integrates the score from the configured initial state across every
/// activation interval plus the configured tail.
pub fn simulate_score(score: &GestureScore, config: &SimulationConfig) -> Result<SimOutput> {
    config.validate()?;
    let first = score.gestures.first().ok_or(Error::EmptyScore)?;
    if let Some(other) = score.gestures.iter().find(|g| g.tract_variable != first.tract_variable) {
        return Err(Error::MixedTractVariables(
            first.tract_variable.clone(),
            other.tract_variable.clone(),
        ));
    }
    score.check_guard(config.initial_position)?;

    let windows: Vec<(usize, usize)> = score
        .gestures
        .iter()
        .map(|g| (config.steps(g.activation.onset_s), config.steps(g.activation.offset_s)))
        .collect();
    let driven_steps = windows.iter().map(|w| w.1).max().unwrap_or(0);
    let n_steps = driven_steps + config.steps(config.tail_after_last_offset);

    let mut out = SimOutput {
        time: Vec::with_capacity(n_steps + 1),
        position: Vec::with_capacity(n_steps + 1),
        velocity: Vec::with_capacity(n_steps + 1),
        active_count: Vec::with_capacity(n_steps + 1),
        dt: config.dt,
    };
    let mut state = State::new(config.initial_position, config.initial_velocity);
    let mut active = Vec::with_capacity(score.gestures.len());
    for step in 0..=n_steps {
        active.clear();
        active.extend(
            score
                .gestures
                .iter()
                .zip(&windows)
                .filter(|(_, &(lo, hi))| lo <= step && step < hi)
                .map(|(g, _)| g.params),
        );
        let time_s = step as f64 * config.dt;
        out.time.push(time_s);
        out.position.push(state.position);
        out.velocity.push(state.velocity);
        out.active_count.push(if step < n_steps { active.len() } else { 0 });
        if step == n_steps {
            break;
        }
        state = if active.is_empty() {
            State::new(state.position, 0.0)
        } else {
            step_at(state, &blend_active(&active)?, config.dt, time_s)?
        };
    }
    Ok(out)
}

/// A speed profile on an explicit time axis, simulated or empirical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedCurve {
    pub time: Vec<f64>,
    pub speed: Vec<f64>,
}

impl From<&SimOutput> for SpeedCurve {
    fn from(sim: &SimOutput) -> Self {
        SpeedCurve {
            time: sim.time.clone(),
            speed: sim.speed(),
        }
    }
}

impl SpeedCurve {
    /// Time from curve start to peak speed divided by time from start until
    /// 90% of the total path length has been covered.
    ///
    /// The peak time is refined by a parabola through the maximum and its
    /// neighbours and the 90% crossing by linear interpolation of the
    /// trapezoidal path integral, so the ratio varies continuously with the
    /// shape of the profile. `None` for curves without movement.
    pub fn time_to_peak_ratio(&self) -> Option<f64> {
        let n = self.speed.len();
        if n < 3 || self.time.len() != n {
            return None;
        }
        let t0 = self.time[0];
        let (imax, &vmax) = self.speed.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
        if !(vmax.is_finite() && vmax > 0.0) {
            return None;
        }
        let t_peak = if imax > 0 && imax + 1 < n {
            let (a, b, c) = (self.speed[imax - 1], self.speed[imax], self.speed[imax + 1]);
            let denom = a - 2.0 * b + c;
            let offset = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let h = 0.5 * (self.time[imax + 1] - self.time[imax - 1]);
            self.time[imax] + offset.clamp(-0.5, 0.5) * h
        } else {
            self.time[imax]
        };

        let mut path = Vec::with_capacity(n);
        path.push(0.0);
        for i in 1..n {
            let seg = 0.5 * (self.speed[i] + self.speed[i - 1]) * (self.time[i] - self.time[i - 1]);
            path.push(path[i - 1] + seg);
        }
        let goal = MOVEMENT_END_FRACTION * path[n - 1];
        let j = path.iter().position(|&p| p >= goal)?;
        let t_end = if j == 0 {
            self.time[0]
        } else {
            let frac = (goal - path[j - 1]) / (path[j] - path[j - 1]);
            self.time[j - 1] + frac * (self.time[j] - self.time[j - 1])
        };
        let ratio = (t_peak - t0) / (t_end - t0);
        ratio.is_finite().then_some(ratio)
    }
}

/// Upper bound on `d` that keeps the cubic term strictly weaker than the
/// linear restoring force for any displacement up to 1.
pub fn default_d_upper(stiffness: f64) -> f64 {
    0.9 * stiffness
}

/// Finds the uniform cubic coefficient whose simulated time-to-peak ratio
/// best matches `reference`, by golden-section search over `bounds`.
pub fn fit_cubic_d(
    reference: &SpeedCurve,
    score: &GestureScore,
    config: &SimulationConfig,
    bounds: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::param("bounds", format!("({lo}, {hi}) is not a valid interval")));
    }
    score.with_cubic_d(hi)?.check_guard(config.initial_position)?;
    let wanted = reference
        .time_to_peak_ratio()
        .ok_or_else(|| Error::param("reference", "speed curve has no movement"))?;

    let objective = |d: f64| -> Result<f64> {
        let sim = score
            .with_cubic_d(d)
            .and_then(|s| simulate_score(&s, config))
            .map_err(|_| Error::DivergedFit { d })?;
        let ratio = SpeedCurve::from(&sim)
            .time_to_peak_ratio()
            .ok_or(Error::DivergedFit { d })?;
        let miss = (ratio - wanted).powi(2);
        if miss.is_finite() {
            Ok(miss)
        } else {
            Err(Error::DivergedFit { d })
        }
    };

    golden_section(objective, lo, hi, FIT_TOLERANCE)
}

fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if b - a <= tol {
        return Ok(if fa <= fb { a } else { b });
    }
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    // the bracket can collapse onto an endpoint that beats every interior probe
    let (mut best, mut best_f) = if fc <= fd { (c, fc) } else { (d, fd) };
    for (x, fx) in [(lo, fa), (hi, fb)] {
        if fx < best_f {
            best = x;
            best_f = fx;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gesture(target: f64, onset: f64, duration: f64, strength: f64, role: Role) -> Gesture {
        Gesture::tbcd(
            GestureParams::new(target, DEFAULT_STIFFNESS, 0.0, strength).unwrap(),
            Activation::new(onset, duration).unwrap(),
            role,
        )
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let p = GestureParams::new(0.4, 2000.0, 900.0, 1.0).unwrap();
        let s = step_dynamics(State::new(0.4, 0.0), &p, 0.001).unwrap();
        assert_eq!(s, State::new(0.4, 0.0));
    }

    #[test]
    fn damping_is_critical() {
        let p = GestureParams::new(0.5, 1234.5, 0.0, 1.0).unwrap();
        assert_eq!(p.damping(), 2.0 * (p.mass() * 1234.5f64).sqrt());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GestureParams::new(1.2, 2000.0, 0.0, 1.0).is_err());
        assert!(GestureParams::new(0.5, 0.0, 0.0, 1.0).is_err());
        assert!(GestureParams::new(0.5, 2000.0, -1.0, 1.0).is_err());
        assert!(GestureParams::new(0.5, 2000.0, 0.0, 0.0).is_err());
        assert!(Activation::new(0.0, 0.0).is_err());
    }

    #[test]
    fn blend_single_is_identity() {
        let p = GestureParams::new(0.3, 2000.0, 50.0, 7.0).unwrap();
        assert_eq!(blend_active(&[p]).unwrap(), p);
    }

    #[test]
    fn blend_weighted_target() {
        let a = GestureParams::new(0.3, 2000.0, 0.0, 1.0).unwrap();
        let b = GestureParams::new(0.9, 2000.0, 0.0, 100.0).unwrap();
        let e = blend_active(&[a, b]).unwrap();
        assert!((e.target() - (0.3 + 90.0) / 101.0).abs() < 1e-12);
        assert!((e.target() - 0.8941).abs() < 1e-4);
        assert_eq!(e.damping(), 2.0 * e.stiffness().sqrt());
    }

    #[test]
    fn blend_identical_targets() {
        let a = GestureParams::new(0.3, 2000.0, 0.0, 1.0).unwrap();
        let b = GestureParams::new(0.3, 2000.0, 0.0, 100.0).unwrap();
        assert_eq!(blend_active(&[a, b]).unwrap().target(), 0.3);
    }

    #[test]
    fn blend_empty_errors() {
        assert!(matches!(blend_active(&[]), Err(Error::NoActiveGesture)));
    }

    #[test]
    fn empty_score_errors() {
        let r = simulate_score(&GestureScore::default(), &SimulationConfig::default());
        assert!(matches!(r, Err(Error::EmptyScore)));
    }

    #[test]
    fn mixed_tract_variables_rejected() {
        let mut other = gesture(0.5, 0.0, 0.25, 1.0, Role::Single);
        other.tract_variable = "LA".into();
        let score = GestureScore::new(vec![gesture(0.3, 0.0, 0.25, 1.0, Role::Single), other]);
        assert!(matches!(
            simulate_score(&score, &SimulationConfig::default()),
            Err(Error::MixedTractVariables(..))
        ));
    }

    #[test]
    fn guard_rejects_strong_cubic_term() {
        let g = Gesture::tbcd(
            GestureParams::new(1.0, 2000.0, 2500.0, 1.0).unwrap(),
            Activation::new(0.0, 0.25).unwrap(),
            Role::Single,
        );
        let r = simulate_score(&GestureScore::new(vec![g]), &SimulationConfig::default());
        assert!(matches!(r, Err(Error::GuardViolation { .. })));
    }

    #[test]
    fn single_gesture_duration_and_lengths() {
        let score = GestureScore::new(vec![gesture(0.3, 0.0, 0.25, 1.0, Role::Single)]);
        let out = simulate_score(&score, &SimulationConfig::default()).unwrap();
        assert_eq!(out.len(), 251);
        assert_eq!(out.position.len(), out.velocity.len());
        assert!((out.driven_duration_s() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn state_frozen_after_offset() {
        let score = GestureScore::new(vec![gesture(0.3, 0.0, 0.25, 1.0, Role::Single)]);
        let cfg = SimulationConfig {
            tail_after_last_offset: 0.05,
            ..Default::default()
        };
        let out = simulate_score(&score, &cfg).unwrap();
        assert_eq!(out.len(), 301);
        let held = out.position[250];
        for i in 251..out.len() {
            assert_eq!(out.position[i], held);
            assert_eq!(out.velocity[i], 0.0);
            assert_eq!(out.active_count[i], 0);
        }
        assert!((out.driven_duration_s() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ratio_of_symmetric_profile() {
        // raised cosine: peak at the midpoint
        let n = 1001;
        let time: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let speed = time
            .iter()
            .map(|t| 1.0 - (2.0 * std::f64::consts::PI * t).cos())
            .collect();
        let r = SpeedCurve { time, speed }.time_to_peak_ratio().unwrap();
        // 90% of the path of 1 - cos(2 pi t) is reached at t = 0.741094 (root of t - sin(2 pi t)/(2 pi) = 0.9)
        assert!((r - 0.5 / 0.741094).abs() < 1e-4, "{r}");
    }

    #[test]
    fn static_curve_has_no_ratio() {
        let c = SpeedCurve {
            time: vec![0.0, 0.1, 0.2],
            speed: vec![0.0; 3],
        };
        assert_eq!(c.time_to_peak_ratio(), None);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let x = golden_section(|x| Ok((x - 0.37).powi(2)), 0.0, 1.0, 1e-9).unwrap();
        assert!((x - 0.37).abs() < 1e-8);
        let edge = golden_section(Ok, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(edge, 0.0);
    }
}

//! Local extrema with topographic prominence.

use serde::{Deserialize, Serialize};

pub const DEFAULT_PROMINENCE_FRAC: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub value: f64,
    pub prominence: f64,
}

/// Interior local maxima; flat tops are reported at their midpoint.
fn local_maxima(x: &[f64]) -> Vec<usize> {
    let n = x.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = 1;
    while i < n - 1 {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead < n - 1 && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                out.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    out
}

fn prominence(x: &[f64], peak: usize) -> f64 {
    let top = x[peak];
    let mut left_min = top;
    for &v in x[..peak].iter().rev() {
        if v > top {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = top;
    for &v in &x[peak + 1..] {
        if v > top {
            break;
        }
        right_min = right_min.min(v);
    }
    top - left_min.max(right_min)
}

/// Interior peaks whose prominence is at least `min_prominence`, in time order.
pub fn find_peaks(x: &[f64], min_prominence: f64) -> Vec<Extremum> {
    local_maxima(x)
        .into_iter()
        .map(|index| Extremum {
            index,
            value: x[index],
            prominence: prominence(x, index),
        })
        .filter(|e| e.prominence >= min_prominence)
        .collect()
}

/// `None` when the series never moves.
fn threshold(speed: &[f64], prominence_frac: f64) -> Option<f64> {
    let max = speed.iter().copied().fold(0.0, f64::max);
    (max > 0.0).then_some(prominence_frac * max)
}

/// Speed peaks with prominence of at least `prominence_frac` of the series
/// maximum.
pub fn velocity_peaks(speed: &[f64], prominence_frac: f64) -> Vec<Extremum> {
    let Some(t) = threshold(speed, prominence_frac) else {
        return Vec::new();
    };
    find_peaks(speed, t)
}

/// Interior speed minima with prominence of at least `prominence_frac` of the
/// series maximum. Values are reported on the original (unnegated) scale.
pub fn velocity_minima(speed: &[f64], prominence_frac: f64) -> Vec<Extremum> {
    let Some(t) = threshold(speed, prominence_frac) else {
        return Vec::new();
    };
    let negated: Vec<f64> = speed.iter().map(|v| -v).collect();
    find_peaks(&negated, t)
        .into_iter()
        .map(|e| Extremum { value: -e.value, ..e })
        .collect()
}

pub fn count_velocity_minima(speed: &[f64], prominence_frac: f64) -> usize {
    velocity_minima(speed, prominence_frac).len()
}

pub fn count_velocity_peaks(speed: &[f64], prominence_frac: f64) -> usize {
    velocity_peaks(speed, prominence_frac).len()
}

//! Measurement primitives for sensor and formant trajectories.
//!
//! Conventions used throughout:
//! - sample `i` of a trajectory sits at `i / sample_rate_hz` seconds;
//! - z-scores use the population standard deviation;
//! - derivatives are central differences with one-sided first differences at
//!   the two ends;
//! - values at fractional times are linearly interpolated.

pub mod extrema;
pub mod filter;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use extrema::{
    count_velocity_minima, count_velocity_peaks, velocity_minima, velocity_peaks, Extremum, DEFAULT_PROMINENCE_FRAC,
};
pub use filter::{lowpass, Butterworth, DEFAULT_CUTOFF_HZ};

/// Post-offset window retained for articulatory tokens.
pub const ARTICULATORY_TAIL_S: f64 = 0.075;
/// Fraction of the vowel kept for formant analysis, centred.
pub const FORMANT_MID_FRACTION: f64 = 0.9;
pub const DISPLACEMENT_LO_FRAC: f64 = 0.10;
pub const DISPLACEMENT_HI_FRAC: f64 = 0.90;

/// Channels for the tongue dorsum / upper lip measures.
pub const ARTICULATORY_CHANNELS: [&str; 3] = ["TDx", "TDy", "ULx"];
pub const FORMANT_CHANNELS: [&str; 2] = ["F1", "F2"];

const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub name: String,
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    sample_rate_hz: f64,
    channels: Vec<Channel>,
    pub speaker: String,
    pub item: String,
    pub token_id: String,
}

impl Trajectory {
    pub fn new(
        sample_rate_hz: f64,
        channels: Vec<Channel>,
        speaker: impl Into<String>,
        item: impl Into<String>,
        token_id: impl Into<String>,
    ) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::param(
                "sample_rate_hz",
                format!("{sample_rate_hz} must be positive"),
            ));
        }
        let len = channels.first().map_or(0, |c| c.samples.len());
        let mut seen = std::collections::BTreeSet::new();
        for c in &channels {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::DuplicateLabel(c.name.clone()));
            }
            if c.samples.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: c.samples.len(),
                });
            }
            if let Some(index) = c.samples.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    channel: c.name.clone(),
                    index,
                });
            }
        }
        Ok(Trajectory {
            sample_rate_hz,
            channels,
            speaker: speaker.into(),
            item: item.into(),
            token_id: token_id.into(),
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, |c| c.samples.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Time of the last sample.
    pub fn end_s(&self) -> f64 {
        self.len().saturating_sub(1) as f64 / self.sample_rate_hz
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|c| c.name.as_str())
    }

    pub fn has_channel(&self, name: &str) -> bool {
        self.channels.iter().any(|c| c.name == name)
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        self.channels
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.samples.as_slice())
            .ok_or_else(|| Error::MissingChannel(name.to_string()))
    }

    /// Replaces a channel's samples, keeping the length invariant.
    pub fn set_channel(&mut self, name: &str, samples: Vec<f64>) -> Result<()> {
        let len = self.len();
        if samples.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                channel: name.to_string(),
                index,
            });
        }
        let slot = self
            .channels
            .iter_mut()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::MissingChannel(name.to_string()))?;
        slot.samples = samples;
        Ok(())
    }

    /// Channel value at `time_s`, linearly interpolated.
    pub fn value_at(&self, name: &str, time_s: f64) -> Result<f64> {
        interpolate_at(self.channel(name)?, self.sample_rate_hz, time_s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VowelToken {
    pub trajectory: Trajectory,
    pub vowel_onset_s: f64,
    pub vowel_offset_s: f64,
    pub tail_s: f64,
}

impl VowelToken {
    pub fn new(trajectory: Trajectory, vowel_onset_s: f64, vowel_offset_s: f64, tail_s: f64) -> Result<Self> {
        if !(vowel_onset_s.is_finite() && vowel_onset_s >= 0.0) {
            return Err(Error::param("vowel_onset_s", format!("{vowel_onset_s} must be >= 0")));
        }
        if !(vowel_offset_s.is_finite() && vowel_offset_s > vowel_onset_s) {
            return Err(Error::param(
                "vowel_offset_s",
                format!("{vowel_offset_s} must exceed onset {vowel_onset_s}"),
            ));
        }
        if !(tail_s.is_finite() && tail_s >= 0.0) {
            return Err(Error::param("tail_s", format!("{tail_s} must be >= 0")));
        }
        let end = trajectory.end_s();
        if vowel_offset_s + tail_s > end + TIME_EPS {
            return Err(Error::OutOfBounds {
                time_s: vowel_offset_s + tail_s,
                end_s: end,
            });
        }
        Ok(VowelToken {
            trajectory,
            vowel_onset_s,
            vowel_offset_s,
            tail_s,
        })
    }

    pub fn token_id(&self) -> &str {
        &self.trajectory.token_id
    }

    pub fn speaker(&self) -> &str {
        &self.trajectory.speaker
    }

    pub fn item(&self) -> &str {
        &self.trajectory.item
    }

    /// Vowel interval followed by the retained tail.
    pub fn analysis_window(&self) -> (f64, f64) {
        (self.vowel_onset_s, self.vowel_offset_s + self.tail_s)
    }

    /// Centred sub-interval covering `fraction` of the vowel.
    pub fn mid_window(&self, fraction: f64) -> (f64, f64) {
        let trim = 0.5 * (1.0 - fraction) * vowel_duration(self);
        (self.vowel_onset_s + trim, self.vowel_offset_s - trim)
    }
}

pub fn vowel_duration(token: &VowelToken) -> f64 {
    token.vowel_offset_s - token.vowel_onset_s
}

/// Standardises `channel` within each speaker, pooling every sample of that
/// speaker's tokens. Uses the population standard deviation.
pub fn zscore_by_speaker(tokens: &[VowelToken], channel: &str) -> Result<Vec<VowelToken>> {
    let stats = speaker_stats(tokens, channel)?;
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        let (mean, sd) = stats[t.speaker()];
        if sd == 0.0 {
            return Err(Error::DegenerateSpeaker {
                speaker: t.speaker().to_string(),
                channel: channel.to_string(),
            });
        }
        let mut t = t.clone();
        let z = t.trajectory.channel(channel)?.iter().map(|v| (v - mean) / sd).collect();
        t.trajectory.set_channel(channel, z)?;
        out.push(t);
    }
    Ok(out)
}

/// Pooled per-speaker mean and population standard deviation of `channel`.
pub fn speaker_stats(tokens: &[VowelToken], channel: &str) -> Result<BTreeMap<String, (f64, f64)>> {
    let mut pooled: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for t in tokens {
        pooled
            .entry(t.speaker())
            .or_default()
            .extend_from_slice(t.trajectory.channel(channel)?);
    }
    let mut out = BTreeMap::new();
    for (speaker, values) in pooled {
        if values.len() < 2 {
            return Err(Error::DegenerateSpeaker {
                speaker: speaker.to_string(),
                channel: channel.to_string(),
            });
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        out.insert(speaker.to_string(), (mean, var.sqrt()));
    }
    Ok(out)
}

/// First derivative in units per second.
pub fn derivative(series: &[f64], sample_rate_hz: f64) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooShort { len: n, min: 2 });
    }
    let mut out = Vec::with_capacity(n);
    out.push((series[1] - series[0]) * sample_rate_hz);
    for i in 1..n - 1 {
        out.push((series[i + 1] - series[i - 1]) * 0.5 * sample_rate_hz);
    }
    out.push((series[n - 1] - series[n - 2]) * sample_rate_hz);
    Ok(out)
}

/// Per-sample Euclidean norm of the channel derivatives.
pub fn tangential_velocity(channels: &[&[f64]], sample_rate_hz: f64) -> Result<Vec<f64>> {
    if channels.len() < 2 {
        return Err(Error::Arity(channels.len()));
    }
    let len = channels[0].len();
    if let Some(bad) = channels.iter().find(|c| c.len() != len) {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: bad.len(),
        });
    }
    let derivs = channels
        .iter()
        .map(|c| derivative(c, sample_rate_hz))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..len)
        .map(|i| derivs.iter().map(|d| d[i] * d[i]).sum::<f64>().sqrt())
        .collect())
}

/// Value at `time_s` by linear interpolation between neighbouring samples.
pub fn interpolate_at(series: &[f64], sample_rate_hz: f64, time_s: f64) -> Result<f64> {
    let end_s = series.len().saturating_sub(1) as f64 / sample_rate_hz;
    if series.is_empty() || !time_s.is_finite() || time_s < -TIME_EPS || time_s > end_s + TIME_EPS {
        return Err(Error::OutOfBounds { time_s, end_s });
    }
    let pos = (time_s * sample_rate_hz).clamp(0.0, (series.len() - 1) as f64);
    let i = pos.floor() as usize;
    if i + 1 >= series.len() {
        return Ok(series[series.len() - 1]);
    }
    let frac = pos - i as f64;
    Ok(series[i] + frac * (series[i + 1] - series[i]))
}

/// Straight-line distance over `channels` between the positions at
/// `lo_frac` and `hi_frac` of the vowel interval.
pub fn euclidean_displacement(token: &VowelToken, channels: &[&str], lo_frac: f64, hi_frac: f64) -> Result<f64> {
    if !(0.0 < lo_frac && lo_frac < hi_frac && hi_frac < 1.0) {
        return Err(Error::param(
            "fractions",
            format!("need 0 < lo < hi < 1, got ({lo_frac}, {hi_frac})"),
        ));
    }
    if channels.is_empty() {
        return Err(Error::Arity(0));
    }
    let dur = vowel_duration(token);
    let t_lo = token.vowel_onset_s + lo_frac * dur;
    let t_hi = token.vowel_onset_s + hi_frac * dur;
    let mut sum = 0.0;
    for name in channels {
        let a = token.trajectory.value_at(name, t_lo)?;
        let b = token.trajectory.value_at(name, t_hi)?;
        sum += (b - a).powi(2);
    }
    Ok(sum.sqrt())
}

/// Linear interpolation of `series` (sampled at `sample_rate_hz`) onto
/// `n_points` equally spaced times spanning `[start_s, end_s]`.
pub fn resample_window(
    series: &[f64],
    sample_rate_hz: f64,
    start_s: f64,
    end_s: f64,
    n_points: usize,
) -> Result<Vec<f64>> {
    if n_points < 2 {
        return Err(Error::param("n_points", format!("{n_points} must be at least 2")));
    }
    if start_s.is_nan() || end_s.is_nan() || end_s <= start_s {
        return Err(Error::param("window", format!("[{start_s}, {end_s}] is empty")));
    }
    let step = (end_s - start_s) / (n_points - 1) as f64;
    (0..n_points)
        .map(|k| {
            let t = if k == n_points - 1 {
                end_s
            } else {
                start_s + k as f64 * step
            };
            interpolate_at(series, sample_rate_hz, t)
        })
        .collect()
}

/// Resamples the whole series onto `n_points` equally spaced points of
/// normalised time; endpoints are kept exactly.
pub fn resample_normalized(series: &[f64], n_points: usize) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            len: series.len(),
            min: 2,
        });
    }
    if n_points < 2 {
        return Err(Error::param("n_points", format!("{n_points} must be at least 2")));
    }
    let last = (series.len() - 1) as f64;
    Ok((0..n_points)
        .map(|k| {
            if k == n_points - 1 {
                return series[series.len() - 1];
            }
            let pos = k as f64 * last / (n_points - 1) as f64;
            let i = (pos.floor() as usize).min(series.len() - 2);
            let frac = pos - i as f64;
            series[i] + frac * (series[i + 1] - series[i])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(fs: f64, channels: &[(&str, Vec<f64>)], speaker: &str) -> Trajectory {
        Trajectory::new(
            fs,
            channels
                .iter()
                .map(|(n, s)| Channel {
                    name: n.to_string(),
                    samples: s.clone(),
                })
                .collect(),
            speaker,
            "item",
            format!("{speaker}-tok"),
        )
        .unwrap()
    }

    fn ramp_token(values: impl Fn(f64) -> Vec<(&'static str, f64)>) -> VowelToken {
        // unit vowel at 100 Hz: samples at 0.00 .. 1.00 s
        let n = 101;
        let names: Vec<&str> = values(0.0).iter().map(|(n, _)| *n).collect();
        let chans: Vec<(&str, Vec<f64>)> = names
            .iter()
            .enumerate()
            .map(|(c, name)| (*name, (0..n).map(|i| values(i as f64 / 100.0)[c].1).collect()))
            .collect();
        VowelToken::new(traj(100.0, &chans, "s1"), 0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn zscore_small_example() {
        let t = VowelToken::new(traj(10.0, &[("F1", vec![1.0, 2.0, 3.0])], "a"), 0.0, 0.2, 0.0).unwrap();
        let z = zscore_by_speaker(&[t], "F1").unwrap();
        let s = 1.5f64.sqrt();
        let got = z[0].trajectory.channel("F1").unwrap();
        let want = [-s, 0.0, s];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn zscore_rejects_constant_speaker() {
        let t = VowelToken::new(traj(10.0, &[("F1", vec![4.0; 5])], "flat"), 0.0, 0.3, 0.0).unwrap();
        match zscore_by_speaker(&[t], "F1") {
            Err(Error::DegenerateSpeaker { speaker, .. }) => assert_eq!(speaker, "flat"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zscore_speakers_independent() {
        let a = VowelToken::new(traj(10.0, &[("F1", vec![0.0, 1.0, 2.0, 5.0])], "a"), 0.0, 0.3, 0.0).unwrap();
        let b = VowelToken::new(
            traj(10.0, &[("F1", vec![100.0, 130.0, 170.0, 200.0])], "b"),
            0.0,
            0.3,
            0.0,
        )
        .unwrap();
        let z = zscore_by_speaker(&[a, b], "F1").unwrap();
        for t in &z {
            let x = t.trajectory.channel("F1").unwrap();
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / x.len() as f64;
            assert!(mean.abs() < 1e-12);
            assert!((var - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tangential_constant_is_zero() {
        let a = vec![1.0; 10];
        let b = vec![-2.0; 10];
        assert!(tangential_velocity(&[&a, &b], 100.0).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tangential_single_slope() {
        let a: Vec<f64> = (0..20).map(|i| -3.0 * i as f64 / 50.0).collect();
        let b = vec![7.0; 20];
        for v in tangential_velocity(&[&a, &b], 50.0).unwrap() {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tangential_needs_two_channels() {
        let a = vec![0.0; 5];
        assert!(matches!(tangential_velocity(&[&a], 10.0), Err(Error::Arity(1))));
    }

    #[test]
    fn displacement_static_is_zero() {
        let tok = ramp_token(|_| vec![("F1", 2.0), ("F2", -1.0)]);
        assert_eq!(euclidean_displacement(&tok, &["F1", "F2"], 0.1, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn displacement_linear_ramp() {
        let tok = ramp_token(|t| vec![("F1", t)]);
        let d = euclidean_displacement(&tok, &["F1"], 0.1, 0.9).unwrap();
        assert!((d - 0.8).abs() < 1e-12);
    }

    #[test]
    fn displacement_diagonal() {
        let tok = ramp_token(|t| vec![("F1", t), ("F2", t)]);
        let d = euclidean_displacement(&tok, &["F1", "F2"], 0.1, 0.9).unwrap();
        assert!((d - 0.8 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn displacement_bad_fractions() {
        let tok = ramp_token(|t| vec![("F1", t)]);
        assert!(euclidean_displacement(&tok, &["F1"], 0.9, 0.1).is_err());
        assert!(euclidean_displacement(&tok, &["F1"], 0.0, 0.5).is_err());
        assert!(matches!(
            euclidean_displacement(&tok, &["F9"], 0.1, 0.9),
            Err(Error::MissingChannel(_))
        ));
    }

    #[test]
    fn resample_two_points() {
        assert_eq!(resample_normalized(&[2.0, 4.0], 3).unwrap(), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn resample_identity() {
        let x = vec![0.3, -1.0, 2.5, 7.0, 0.0];
        assert_eq!(resample_normalized(&x, x.len()).unwrap(), x);
    }

    #[test]
    fn resample_errors() {
        assert!(resample_normalized(&[1.0], 5).is_err());
        assert!(resample_normalized(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn resample_window_endpoints() {
        let x: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let r = resample_window(&x, 10.0, 0.2, 0.7, 6).unwrap();
        for (k, v) in r.iter().enumerate() {
            assert!((v - (2.0 + k as f64)).abs() < 1e-12);
        }
        assert!(resample_window(&x, 10.0, 0.2, 1.5, 6).is_err());
    }

    #[test]
    fn duration_is_offset_minus_onset() {
        let tok = VowelToken::new(traj(100.0, &[("F1", vec![0.0; 60])], "s"), 0.1, 0.45, 0.0).unwrap();
        assert!((vowel_duration(&tok) - 0.35).abs() < 1e-12);
    }

    #[test]
    fn token_rejects_tail_past_end() {
        let t = traj(100.0, &[("F1", vec![0.0; 50])], "s");
        assert!(VowelToken::new(t.clone(), 0.1, 0.45, 0.075).is_err());
        assert!(VowelToken::new(t.clone(), 0.3, 0.2, 0.0).is_err());
        assert!(VowelToken::new(t.clone(), 0.1, 0.42, 0.075).is_err());
        assert!(VowelToken::new(t, 0.1, 0.40, 0.075).is_ok());
    }

    #[test]
    fn trajectory_rejects_ragged_and_nan() {
        let ragged = Trajectory::new(
            100.0,
            vec![
                Channel {
                    name: "a".into(),
                    samples: vec![0.0; 3],
                },
                Channel {
                    name: "b".into(),
                    samples: vec![0.0; 4],
                },
            ],
            "s",
            "i",
            "t",
        );
        assert!(matches!(ragged, Err(Error::LengthMismatch { .. })));
        let nan = Trajectory::new(
            100.0,
            vec![Channel {
                name: "a".into(),
                samples: vec![0.0, f64::NAN],
            }],
            "s",
            "i",
            "t",
        );
        assert!(matches!(nan, Err(Error::NonFinite { index: 1, .. })));
    }
}

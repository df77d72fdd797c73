//! Seeded synthetic corpus of simulated vowel tokens.
//!
//! Every token is a nucleus + offglide pair coupled anti-phase, so all
//! vowels share one duration and differ only in how far apart the two
//! targets are. TBCD is simulated at 1 kHz, each output channel gets its own
//! white velocity noise (SD a fraction of that channel's peak speed,
//! integrated into position), and the channels are sampled at the
//! articulatory and acoustic rates.
//!
//! The acoustic channels are a linear proxy of TBCD, not a model of
//! articulation-to-acoustics; tokens carry modality `formant-proxy`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use super::studies::StudyParams;
use crate::dynamics::{simulate_score, GestureScore, SimulationConfig};
use crate::error::{Error, Result};
use crate::kinematics::{Channel, Trajectory, VowelToken, ARTICULATORY_TAIL_S};

pub const DEFAULT_SEED: u64 = 20240917;
pub const DEFAULT_SPEAKERS: usize = 6;
pub const DEFAULT_NOISE_FRAC: f64 = 0.05;
pub const PROXY_MODALITY: &str = "formant-proxy";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemClass {
    Monophthong,
    Diphthong,
    Intermediate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticItem {
    pub label: String,
    pub nucleus: f64,
    pub offglide: f64,
    pub class: ItemClass,
}

impl SyntheticItem {
    pub fn new(label: &str, nucleus: f64, offglide: f64, class: ItemClass) -> Self {
        SyntheticItem {
            label: label.to_string(),
            nucleus,
            offglide,
            class,
        }
    }

    pub fn offset(&self) -> f64 {
        (self.offglide - self.nucleus).abs()
    }
}

/// Three low monophthongs, three low-to-high diphthongs and the 0.8/0.7/0.6
/// nucleus sweep against a 0.9 offglide.
pub fn default_items() -> Vec<SyntheticItem> {
    use ItemClass::*;
    vec![
        SyntheticItem::new("bar", 0.3, 0.3, Monophthong),
        SyntheticItem::new("burr", 0.4, 0.4, Monophthong),
        SyntheticItem::new("bore", 0.5, 0.5, Monophthong),
        SyntheticItem::new("buy", 0.3, 0.9, Diphthong),
        SyntheticItem::new("boy", 0.2, 0.9, Diphthong),
        SyntheticItem::new("bough", 0.25, 0.95, Diphthong),
        SyntheticItem::new("beau", 0.8, 0.9, Intermediate),
        SyntheticItem::new("boo", 0.7, 0.9, Intermediate),
        SyntheticItem::new("beer", 0.6, 0.9, Intermediate),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub n_speakers: usize,
    pub reps_per_speaker: usize,
    /// Velocity-noise SD as a fraction of each channel's peak speed.
    pub noise_frac: f64,
    /// SD of a per-token shift applied to both targets.
    pub target_jitter: f64,
    pub articulatory_rate_hz: f64,
    pub acoustic_rate_hz: f64,
    /// Silence before the first gesture.
    pub lead_s: f64,
    /// Recording continues this long past the articulatory tail.
    pub padding_s: f64,
    pub study: StudyParams,
    pub items: Vec<SyntheticItem>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: DEFAULT_SEED,
            n_speakers: DEFAULT_SPEAKERS,
            reps_per_speaker: 2,
            noise_frac: DEFAULT_NOISE_FRAC,
            target_jitter: 0.01,
            articulatory_rate_hz: 250.0,
            acoustic_rate_hz: 500.0,
            lead_s: 0.05,
            padding_s: 0.05,
            study: StudyParams::default(),
            items: default_items(),
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_speakers == 0 || self.reps_per_speaker == 0 {
            return Err(Error::param(
                "n_speakers",
                "need at least one speaker and one repetition",
            ));
        }
        if self.items.is_empty() {
            return Err(Error::param("items", "no items"));
        }
        for (name, v) in [
            ("noise_frac", self.noise_frac),
            ("target_jitter", self.target_jitter),
            ("lead_s", self.lead_s),
            ("padding_s", self.padding_s),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, format!("{v} must be finite and >= 0")));
            }
        }
        let dt = self.study.sim.dt;
        for (name, rate) in [
            ("articulatory_rate_hz", self.articulatory_rate_hz),
            ("acoustic_rate_hz", self.acoustic_rate_hz),
        ] {
            let step = 1.0 / (rate * dt);
            if !(rate > 0.0 && (step - step.round()).abs() < 1e-9 && step.round() >= 1.0) {
                return Err(Error::param(
                    name,
                    format!("{rate} Hz is not an integer divisor of 1/dt"),
                ));
            }
        }
        let mut labels: Vec<&str> = self.items.iter().map(|i| i.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].to_string()));
        }
        self.study.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpus {
    pub config: SyntheticConfig,
    pub articulatory: Vec<VowelToken>,
    pub acoustic: Vec<VowelToken>,
}

impl SyntheticCorpus {
    pub fn reference_items(&self) -> Vec<String> {
        self.config
            .items
            .iter()
            .filter(|i| i.class == ItemClass::Diphthong)
            .map(|i| i.label.clone())
            .collect()
    }

    pub fn item(&self, label: &str) -> Option<&SyntheticItem> {
        self.config.items.iter().find(|i| i.label == label)
    }
}

/// Per-speaker linear map from TBCD to a channel.
#[derive(Clone, Copy)]
struct Map {
    gain: f64,
    offset: f64,
}

struct Speaker {
    articulatory: [Map; 3],
    acoustic: [Map; 2],
}

fn speaker(rng: &mut ChaCha8Rng) -> Speaker {
    let u = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| Uniform::new(lo, hi).expect("valid range").sample(rng);
    let scale = u(rng, 0.9, 1.1);
    Speaker {
        articulatory: [
            Map {
                gain: -u(rng, 8.0, 12.0),
                offset: u(rng, -40.0, -30.0),
            },
            Map {
                gain: u(rng, 12.0, 18.0),
                offset: u(rng, 5.0, 15.0),
            },
            Map {
                gain: u(rng, 1.0, 3.0),
                offset: u(rng, 5.0, 10.0),
            },
        ],
        acoustic: [
            Map {
                gain: -450.0 * scale,
                offset: 750.0 * scale,
            },
            Map {
                gain: 1200.0 * scale,
                offset: 1100.0 * scale,
            },
        ],
    }
}

#[allow(clippy::too_many_arguments)]
fn channel(
    name: &str,
    map: Map,
    position: &[f64],
    peak_speed: f64,
    noise_frac: f64,
    dt: f64,
    step: usize,
    n_out: usize,
    rng: &mut ChaCha8Rng,
) -> Channel {
    let sd = noise_frac * map.gain.abs() * peak_speed;
    let noise = Normal::new(0.0, sd).expect("finite sd");
    let mut drift = 0.0;
    let mut clean_plus_noise = Vec::with_capacity(position.len());
    for &p in position {
        drift += noise.sample(rng) * dt;
        clean_plus_noise.push(map.offset + map.gain * p + drift);
    }
    Channel {
        name: name.to_string(),
        samples: (0..n_out).map(|i| clean_plus_noise[i * step]).collect(),
    }
}

/// Generates the corpus. Same config, same output, bit for bit.
pub fn generate_corpus(config: &SyntheticConfig) -> Result<SyntheticCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let speakers: Vec<Speaker> = (0..config.n_speakers).map(|_| speaker(&mut rng)).collect();
    let jitter = Normal::new(0.0, config.target_jitter).expect("finite sd");
    let dt = config.study.sim.dt;
    let art_step = (1.0 / (config.articulatory_rate_hz * dt)).round() as usize;
    let ac_step = (1.0 / (config.acoustic_rate_hz * dt)).round() as usize;

    let mut articulatory = Vec::new();
    let mut acoustic = Vec::new();
    for (s, spk) in speakers.iter().enumerate() {
        let speaker_id = format!("S{:02}", s + 1);
        for item in &config.items {
            for rep in 0..config.reps_per_speaker {
                let token_id = format!("{speaker_id}-{}-{}", item.label, rep + 1);
                let shift = jitter.sample(&mut rng);
                let shifted = |t: f64| (t + shift).clamp(0.0, 1.0);
                let score = config.study.two_target(shifted(item.nucleus), shifted(item.offglide))?;
                let score = GestureScore::new(
                    score
                        .gestures
                        .into_iter()
                        .map(|mut g| {
                            g.activation.onset_s += config.lead_s;
                            g.activation.offset_s += config.lead_s;
                            g
                        })
                        .collect(),
                );
                let onset = config.lead_s;
                let offset = score.last_offset_s();
                let end = offset + ARTICULATORY_TAIL_S + config.padding_s;
                let sim_cfg = SimulationConfig {
                    tail_after_last_offset: end - offset,
                    ..config.study.sim
                };
                let out = simulate_score(&score, &sim_cfg)?;
                let peak = out.speed().into_iter().fold(0.0, f64::max);
                let n_art = (out.len() - 1) / art_step + 1;
                let n_ac = (out.len() - 1) / ac_step + 1;

                let art_channels = ["TDx", "TDy", "ULx"]
                    .iter()
                    .zip(spk.articulatory)
                    .map(|(name, map)| {
                        channel(
                            name,
                            map,
                            &out.position,
                            peak,
                            config.noise_frac,
                            dt,
                            art_step,
                            n_art,
                            &mut rng,
                        )
                    })
                    .collect();
                let ac_channels = ["F1", "F2"]
                    .iter()
                    .zip(spk.acoustic)
                    .map(|(name, map)| {
                        channel(
                            name,
                            map,
                            &out.position,
                            peak,
                            config.noise_frac,
                            dt,
                            ac_step,
                            n_ac,
                            &mut rng,
                        )
                    })
                    .collect();
                let art = Trajectory::new(
                    config.articulatory_rate_hz,
                    art_channels,
                    &speaker_id,
                    &item.label,
                    &token_id,
                )?;
                let ac = Trajectory::new(
                    config.acoustic_rate_hz,
                    ac_channels,
                    &speaker_id,
                    &item.label,
                    &token_id,
                )?;
                articulatory.push(VowelToken::new(art, onset, offset, ARTICULATORY_TAIL_S)?);
                acoustic.push(VowelToken::new(ac, onset, offset, 0.0)?);
            }
        }
    }
    Ok(SyntheticCorpus {
        config: config.clone(),
        articulatory,
        acoustic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SyntheticConfig {
        SyntheticConfig {
            n_speakers: 2,
            reps_per_speaker: 1,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn deterministic() {
        let a = generate_corpus(&small()).unwrap();
        let b = generate_corpus(&small()).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(&SyntheticConfig { seed: 1, ..small() }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn shapes() {
        let c = generate_corpus(&small()).unwrap();
        assert_eq!(c.articulatory.len(), 18);
        let t = &c.articulatory[0];
        assert_eq!(t.trajectory.sample_rate_hz(), 250.0);
        assert!((t.vowel_offset_s - t.vowel_onset_s - 0.375).abs() < 1e-5);
        assert!(c.acoustic[0].trajectory.has_channel("F2"));
        assert_eq!(c.reference_items(), vec!["buy", "boy", "bough"]);
    }

    #[test]
    fn rejects_bad_rate() {
        let cfg = SyntheticConfig {
            articulatory_rate_hz: 300.0,
            ..small()
        };
        assert!(generate_corpus(&cfg).is_err());
    }
}

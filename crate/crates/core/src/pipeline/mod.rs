//! End-to-end diphthongisation measures.
//!
//! Per token, two branches run side by side:
//!
//! - articulatory: z-score per speaker, low-pass, tangential TD/UL velocity
//!   over the vowel plus a 75 ms tail, resampled to the fPCA grid; plus the
//!   10-90% Euclidean displacement of (TDx, TDy, ULx);
//! - acoustic: z-score per speaker, low-pass, tangential F1/F2 velocity over
//!   the mid 90% of the vowel, resampled; plus the 10-90% displacement of
//!   (F1, F2).
//!
//! Each branch is then decomposed by fPCA and its PC1 score becomes the
//! token's shape measure. PC1 is oriented so that a reference set of items
//! (canonical diphthongs) scores positive on average.

pub mod studies;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::clustering::{cut_tree, standardize_columns, ward_linkage, Dendrogram};
use crate::error::{Error, Result};
use crate::fpca::{fpca_fit_with, fpca_reconstruct, FpcaModel, DEFAULT_GRID_SIZE, DEFAULT_RETAIN_FRACTION};
use crate::kinematics::{
    euclidean_displacement, lowpass, resample_window, speaker_stats, tangential_velocity, vowel_duration, VowelToken,
    ARTICULATORY_CHANNELS, ARTICULATORY_TAIL_S, DEFAULT_CUTOFF_HZ, DISPLACEMENT_HI_FRAC, DISPLACEMENT_LO_FRAC,
    FORMANT_CHANNELS, FORMANT_MID_FRACTION,
};

pub use studies::{duration_table, run_fig14_study, run_fig16_sweep, DurationSummary, SimulationStudy, StudyRun};
pub use synthetic::{generate_corpus, ItemClass, SyntheticConfig, SyntheticCorpus, SyntheticItem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiphthongMeasures {
    pub token_id: String,
    pub speaker: String,
    pub item: String,
    pub art_euclidean: f64,
    pub art_pc1: f64,
    pub ac_euclidean: f64,
    pub ac_pc1: f64,
    pub duration_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    ArtEuclidean,
    ArtPc1,
    AcEuclidean,
    AcPc1,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::ArtEuclidean,
        Measure::ArtPc1,
        Measure::AcEuclidean,
        Measure::AcPc1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::ArtEuclidean => "art_euclidean",
            Measure::ArtPc1 => "art_pc1",
            Measure::AcEuclidean => "ac_euclidean",
            Measure::AcPc1 => "ac_pc1",
        }
    }

    pub fn of(self, m: &DiphthongMeasures) -> f64 {
        match self {
            Measure::ArtEuclidean => m.art_euclidean,
            Measure::ArtPc1 => m.art_pc1,
            Measure::AcEuclidean => m.ac_euclidean,
            Measure::AcPc1 => m.ac_pc1,
        }
    }
}

/// Which measures feed the clustering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSubset {
    #[default]
    Combined,
    Articulatory,
    Acoustic,
}

impl MeasureSubset {
    pub fn measures(self) -> &'static [Measure] {
        match self {
            MeasureSubset::Combined => &Measure::ALL,
            MeasureSubset::Articulatory => &[Measure::ArtEuclidean, Measure::ArtPc1],
            MeasureSubset::Acoustic => &[Measure::AcEuclidean, Measure::AcPc1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuresConfig {
    pub cutoff_hz: f64,
    pub grid_size: usize,
    pub articulatory_tail_s: f64,
    pub formant_mid_fraction: f64,
    pub lo_frac: f64,
    pub hi_frac: f64,
    pub retain_fraction: f64,
    /// Items whose mean PC1 score is made positive in both branches.
    pub reference_items: Vec<String>,
}

impl Default for MeasuresConfig {
    fn default() -> Self {
        MeasuresConfig {
            cutoff_hz: DEFAULT_CUTOFF_HZ,
            grid_size: DEFAULT_GRID_SIZE,
            articulatory_tail_s: ARTICULATORY_TAIL_S,
            formant_mid_fraction: FORMANT_MID_FRACTION,
            lo_frac: DISPLACEMENT_LO_FRAC,
            hi_frac: DISPLACEMENT_HI_FRAC,
            retain_fraction: DEFAULT_RETAIN_FRACTION,
            reference_items: Vec::new(),
        }
    }
}

impl MeasuresConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_hz.is_finite() && self.cutoff_hz > 0.0) {
            return Err(Error::param(
                "cutoff_hz",
                format!("{} must be positive", self.cutoff_hz),
            ));
        }
        if self.grid_size < 2 {
            return Err(Error::param(
                "grid_size",
                format!("{} must be at least 2", self.grid_size),
            ));
        }
        if !(self.articulatory_tail_s.is_finite() && self.articulatory_tail_s >= 0.0) {
            return Err(Error::param("articulatory_tail_s", "must be >= 0"));
        }
        if !(self.formant_mid_fraction > 0.0 && self.formant_mid_fraction <= 1.0) {
            return Err(Error::param("formant_mid_fraction", "must be in (0, 1]"));
        }
        if !(0.0 < self.lo_frac && self.lo_frac < self.hi_frac && self.hi_frac < 1.0) {
            return Err(Error::param("fractions", "need 0 < lo < hi < 1"));
        }
        if !(self.retain_fraction > 0.0 && self.retain_fraction <= 1.0) {
            return Err(Error::param("retain_fraction", "must be in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Articulatory,
    Acoustic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedToken {
    pub token_id: String,
    pub branch: Branch,
    pub reason: String,
}

/// Per-branch intermediate results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchResult {
    pub token_ids: Vec<String>,
    pub items: Vec<String>,
    pub speakers: Vec<String>,
    /// Time-normalised speed curves, one per token.
    pub curves: Vec<Vec<f64>>,
    pub euclidean: Vec<f64>,
    pub durations_s: Vec<f64>,
    /// `None` when fewer than two tokens survive.
    pub model: Option<FpcaModel>,
    pub pc1_flipped: bool,
}

impl BranchResult {
    pub fn pc1(&self, row: usize) -> f64 {
        self.model.as_ref().map_or(0.0, |m| m.score(row, 0))
    }

    fn row_of(&self) -> BTreeMap<&str, usize> {
        self.token_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuresReport {
    pub measures: Vec<DiphthongMeasures>,
    pub skipped: Vec<SkippedToken>,
    pub articulatory: BranchResult,
    pub acoustic: BranchResult,
}

type WindowFn<'a> = Box<dyn Fn(&VowelToken) -> (f64, f64) + 'a>;

struct BranchSpec<'a> {
    branch: Branch,
    channels: &'a [&'a str],
    window: WindowFn<'a>,
}

/// z-scores each channel within speaker. A speaker whose channel does not
/// vary is only centred, so static recordings measure as zero movement.
fn standardize(tokens: &[VowelToken], channels: &[&str]) -> Result<Vec<VowelToken>> {
    let mut out = tokens.to_vec();
    for &channel in channels {
        let stats = speaker_stats(tokens, channel).or_else(|e| match e {
            Error::DegenerateSpeaker { .. } => {
                // fewer than two samples: centre on the sample itself
                let mut m = BTreeMap::new();
                for t in tokens {
                    let v = t.trajectory.channel(channel)?;
                    m.insert(t.speaker().to_string(), (v.first().copied().unwrap_or(0.0), 0.0));
                }
                Ok(m)
            }
            other => Err(other),
        })?;
        for t in &mut out {
            let (mean, sd) = stats[t.speaker()];
            if sd == 0.0 {
                warn!(
                    "speaker `{}` has no variance on `{channel}`; centring only",
                    t.speaker()
                );
            }
            let scale = if sd > 0.0 { sd } else { 1.0 };
            let z = t
                .trajectory
                .channel(channel)?
                .iter()
                .map(|v| (v - mean) / scale)
                .collect();
            t.trajectory.set_channel(channel, z)?;
        }
    }
    Ok(out)
}

fn run_branch(
    tokens: &[VowelToken],
    spec: &BranchSpec,
    cfg: &MeasuresConfig,
    skipped: &mut Vec<SkippedToken>,
) -> Result<BranchResult> {
    let mut usable = Vec::with_capacity(tokens.len());
    for t in tokens {
        match spec.channels.iter().find(|c| !t.trajectory.has_channel(c)) {
            Some(missing) => {
                let reason = format!("missing channel `{missing}`");
                warn!("skipping {} ({:?}): {reason}", t.token_id(), spec.branch);
                skipped.push(SkippedToken {
                    token_id: t.token_id().to_string(),
                    branch: spec.branch,
                    reason,
                });
            }
            None => usable.push(t.clone()),
        }
    }
    let standardized = standardize(&usable, spec.channels)?;

    let mut result = BranchResult {
        token_ids: Vec::new(),
        items: Vec::new(),
        speakers: Vec::new(),
        curves: Vec::new(),
        euclidean: Vec::new(),
        durations_s: Vec::new(),
        model: None,
        pc1_flipped: false,
    };
    for mut t in standardized {
        let measured = (|| -> Result<(Vec<f64>, f64)> {
            let fs = t.trajectory.sample_rate_hz();
            let mut smoothed = Vec::with_capacity(spec.channels.len());
            for &c in spec.channels {
                let s = lowpass(t.trajectory.channel(c)?, fs, cfg.cutoff_hz)?;
                t.trajectory.set_channel(c, s.clone())?;
                smoothed.push(s);
            }
            let refs: Vec<&[f64]> = smoothed.iter().map(Vec::as_slice).collect();
            let speed = tangential_velocity(&refs, fs)?;
            let (start, end) = (spec.window)(&t);
            let curve = resample_window(&speed, fs, start, end, cfg.grid_size)?;
            let ed = euclidean_displacement(&t, spec.channels, cfg.lo_frac, cfg.hi_frac)?;
            Ok((curve, ed))
        })();
        match measured {
            Ok((curve, ed)) => {
                result.token_ids.push(t.token_id().to_string());
                result.items.push(t.item().to_string());
                result.speakers.push(t.speaker().to_string());
                result.curves.push(curve);
                result.euclidean.push(ed);
                result.durations_s.push(vowel_duration(&t));
            }
            Err(e) => {
                warn!("skipping {} ({:?}): {e}", t.token_id(), spec.branch);
                skipped.push(SkippedToken {
                    token_id: t.token_id().to_string(),
                    branch: spec.branch,
                    reason: e.to_string(),
                });
            }
        }
    }

    if result.curves.len() >= 2 {
        let mut model = fpca_fit_with(&result.curves, cfg.retain_fraction)?;
        let reference: BTreeSet<&str> = cfg.reference_items.iter().map(String::as_str).collect();
        let rows: Vec<usize> = (0..result.items.len())
            .filter(|&i| reference.contains(result.items[i].as_str()))
            .collect();
        result.pc1_flipped = model.orient(0, &rows);
        result.model = Some(model);
    } else {
        warn!(
            "{:?} branch has {} token(s); PC1 set to 0",
            spec.branch,
            result.curves.len()
        );
    }
    Ok(result)
}

/// Runs both branches and joins them on `token_id`. Tokens missing a
/// channel, failing a measurement or lacking a partner in the other branch
/// are skipped and reported, never dropped silently.
pub fn compute_measures(
    art_tokens: &[VowelToken],
    ac_tokens: &[VowelToken],
    cfg: &MeasuresConfig,
) -> Result<MeasuresReport> {
    cfg.validate()?;
    let mut skipped = Vec::new();
    let tail = cfg.articulatory_tail_s;
    let mid = cfg.formant_mid_fraction;
    let art_spec = BranchSpec {
        branch: Branch::Articulatory,
        channels: &ARTICULATORY_CHANNELS,
        window: Box::new(move |t: &VowelToken| (t.vowel_onset_s, t.vowel_offset_s + tail)),
    };
    let ac_spec = BranchSpec {
        branch: Branch::Acoustic,
        channels: &FORMANT_CHANNELS,
        window: Box::new(move |t: &VowelToken| t.mid_window(mid)),
    };
    let articulatory = run_branch(art_tokens, &art_spec, cfg, &mut skipped)?;
    let acoustic = run_branch(ac_tokens, &ac_spec, cfg, &mut skipped)?;

    let ac_rows = acoustic.row_of();
    let art_rows = articulatory.row_of();
    let mut measures = Vec::new();
    for (row, id) in articulatory.token_ids.iter().enumerate() {
        match ac_rows.get(id.as_str()) {
            Some(&ac_row) => measures.push(DiphthongMeasures {
                token_id: id.clone(),
                speaker: articulatory.speakers[row].clone(),
                item: articulatory.items[row].clone(),
                art_euclidean: articulatory.euclidean[row],
                art_pc1: articulatory.pc1(row),
                ac_euclidean: acoustic.euclidean[ac_row],
                ac_pc1: acoustic.pc1(ac_row),
                duration_s: articulatory.durations_s[row],
            }),
            None => {
                warn!("skipping {id}: no acoustic token");
                skipped.push(SkippedToken {
                    token_id: id.clone(),
                    branch: Branch::Acoustic,
                    reason: "no acoustic token with this id".into(),
                });
            }
        }
    }
    for id in acoustic
        .token_ids
        .iter()
        .filter(|id| !art_rows.contains_key(id.as_str()))
    {
        warn!("skipping {id}: no articulatory token");
        skipped.push(SkippedToken {
            token_id: id.clone(),
            branch: Branch::Articulatory,
            reason: "no articulatory token with this id".into(),
        });
    }
    Ok(MeasuresReport {
        measures,
        skipped,
        articulatory,
        acoustic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemMeans {
    pub item: String,
    pub n_tokens: usize,
    pub art_euclidean: f64,
    pub art_pc1: f64,
    pub ac_euclidean: f64,
    pub ac_pc1: f64,
    pub duration_s: f64,
}

impl ItemMeans {
    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::ArtEuclidean => self.art_euclidean,
            Measure::ArtPc1 => self.art_pc1,
            Measure::AcEuclidean => self.ac_euclidean,
            Measure::AcPc1 => self.ac_pc1,
        }
    }
}

/// Per-item means of every measure, ordered by item label.
pub fn item_means(measures: &[DiphthongMeasures]) -> Vec<ItemMeans> {
    let mut groups: BTreeMap<&str, Vec<&DiphthongMeasures>> = BTreeMap::new();
    for m in measures {
        groups.entry(m.item.as_str()).or_default().push(m);
    }
    groups
        .into_iter()
        .map(|(item, rows)| {
            let n = rows.len() as f64;
            let mean = |f: fn(&DiphthongMeasures) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
            ItemMeans {
                item: item.to_string(),
                n_tokens: rows.len(),
                art_euclidean: mean(|r| r.art_euclidean),
                art_pc1: mean(|r| r.art_pc1),
                ac_euclidean: mean(|r| r.ac_euclidean),
                ac_pc1: mean(|r| r.ac_pc1),
                duration_s: mean(|r| r.duration_s),
            }
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    let r = sxy / (sxx * syy).sqrt();
    r.is_finite().then(|| r.clamp(-1.0, 1.0))
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&ranks(x), &ranks(y))
}

/// Pearson correlations between columns. Symmetric with unit diagonal.
pub fn correlation_matrix(columns: &[(&str, Vec<f64>)]) -> Result<Vec<Vec<f64>>> {
    let n = columns.first().map_or(0, |c| c.1.len());
    if n < 3 {
        return Err(Error::param("rows", format!("need at least 3 rows, got {n}")));
    }
    for (name, c) in columns {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: c.len(),
            });
        }
        let mean = c.iter().sum::<f64>() / n as f64;
        if c.iter().all(|v| *v == mean) || c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() == 0.0 {
            return Err(Error::ZeroVariance(name.to_string()));
        }
    }
    let k = columns.len();
    let mut out = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r =
                pearson(&columns[i].1, &columns[j].1).ok_or_else(|| Error::ZeroVariance(columns[j].0.to_string()))?;
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}

/// Correlations between the by-item means of the four measures.
pub fn measure_correlations(means: &[ItemMeans]) -> Result<Vec<Vec<f64>>> {
    let cols: Vec<(&str, Vec<f64>)> = Measure::ALL
        .iter()
        .map(|&m| (m.name(), means.iter().map(|r| r.get(m)).collect()))
        .collect();
    correlation_matrix(&cols)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemClustering {
    pub subset: MeasureSubset,
    pub k: usize,
    pub dendrogram: Dendrogram,
    pub assignment: BTreeMap<String, usize>,
}

/// Ward clustering of items on their standardised mean measures.
pub fn cluster_items(means: &[ItemMeans], subset: MeasureSubset, k: usize) -> Result<ItemClustering> {
    let measures = subset.measures();
    let names: Vec<&str> = measures.iter().map(|m| m.name()).collect();
    let rows: Vec<Vec<f64>> = means
        .iter()
        .map(|r| measures.iter().map(|&m| r.get(m)).collect())
        .collect();
    let z = standardize_columns(&rows, &names)?;
    let points: Vec<(String, Vec<f64>)> = means.iter().map(|r| r.item.clone()).zip(z).collect();
    let dendrogram = ward_linkage(&points)?;
    let assignment = cut_tree(&dendrogram, k)?;
    Ok(ItemClustering {
        subset,
        k,
        dendrogram,
        assignment,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Distribution {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Some(Distribution {
            n,
            mean,
            sd,
            min: sorted[0],
            median,
            max: sorted[n - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub items: Vec<String>,
    pub measures: BTreeMap<Measure, Distribution>,
    /// Mean curve plus the cluster's mean PC1 times PC1.
    pub art_curve: Vec<f64>,
    pub ac_curve: Vec<f64>,
}

fn reconstruct_pc1(model: Option<&FpcaModel>, pc1: f64) -> Result<Vec<f64>> {
    match model {
        Some(m) if m.n_components() > 0 => fpca_reconstruct(m, &[pc1], 1),
        Some(m) => Ok(m.mean.clone()),
        None => Ok(Vec::new()),
    }
}

/// Token-level distributions of every measure per cluster. When the branch
/// models are given, each cluster also gets the velocity curve reconstructed
/// from its mean PC1 score; otherwise the curves are empty.
pub fn summarize_clusters(
    measures: &[DiphthongMeasures],
    assignment: &BTreeMap<String, usize>,
    art_model: Option<&FpcaModel>,
    ac_model: Option<&FpcaModel>,
) -> Result<Vec<ClusterSummary>> {
    let mut by_cluster: BTreeMap<usize, Vec<&DiphthongMeasures>> = BTreeMap::new();
    for m in measures {
        if let Some(&c) = assignment.get(&m.item) {
            by_cluster.entry(c).or_default().push(m);
        }
    }
    let mut out = Vec::new();
    for (cluster, rows) in by_cluster {
        let items: BTreeSet<String> = rows.iter().map(|r| r.item.clone()).collect();
        let mut dists = BTreeMap::new();
        for m in Measure::ALL {
            let values: Vec<f64> = rows.iter().map(|r| m.of(r)).collect();
            let d = Distribution::of(&values).ok_or_else(|| Error::EmptyGroup(format!("cluster {cluster}")))?;
            dists.insert(m, d);
        }
        let art_pc1 = dists[&Measure::ArtPc1].mean;
        let ac_pc1 = dists[&Measure::AcPc1].mean;
        out.push(ClusterSummary {
            cluster,
            items: items.into_iter().collect(),
            measures: dists,
            art_curve: reconstruct_pc1(art_model, art_pc1)?,
            ac_curve: reconstruct_pc1(ac_model, ac_pc1)?,
        });
    }
    Ok(out)
}

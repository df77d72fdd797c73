//! File formats and staged output.
//!
//! Trajectories are stored as one CSV per token (one column per channel, an
//! optional leading `time_s` column) plus a JSON sidecar with the same stem.
//! Every command writes into a staging directory and moves the files into
//! place only once all of them have been produced.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use tempfile::TempDir;

use crate::clustering::Dendrogram;
use crate::coordination::{resolve_schedule, CouplingGraph, CouplingSpec};
use crate::dynamics::{
    Activation, Gesture, GestureParams, GestureScore, Role, SimOutput, DEFAULT_ACTIVATION_S, DEFAULT_STIFFNESS,
};
use crate::error::{Error, Result};
use crate::fpca::FpcaModel;
use crate::kinematics::{
    Channel, Trajectory, VowelToken, ARTICULATORY_CHANNELS, ARTICULATORY_TAIL_S, FORMANT_CHANNELS,
};
use crate::pipeline::DiphthongMeasures;

fn json_err(path: &Path) -> impl FnOnce(serde_json::Error) -> Error + '_ {
    move |source| Error::Json {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(json_err(path))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

fn default_tract_variable() -> String {
    "TBCD".into()
}
fn default_stiffness() -> f64 {
    DEFAULT_STIFFNESS
}
fn default_strength() -> f64 {
    1.0
}
fn default_duration() -> f64 {
    DEFAULT_ACTIVATION_S
}
fn default_role() -> Role {
    Role::Single
}

/// One gesture as written in a score file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GestureEntry {
    #[serde(default = "default_tract_variable")]
    pub tract_variable: String,
    pub target: f64,
    #[serde(default = "default_stiffness")]
    pub k: f64,
    #[serde(default)]
    pub d: f64,
    #[serde(default = "default_strength")]
    pub blending_strength: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub onset_s: Option<f64>,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_role")]
    pub role: Role,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScore<'a> {
    #[serde(borrow)]
    gestures: Vec<&'a RawValue>,
    #[serde(default)]
    coupling: Option<CouplingSpec>,
}

fn line_of(text: &str, fragment: &str) -> usize {
    let offset = fragment.as_ptr() as usize - text.as_ptr() as usize;
    text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
}

/// A score file: gestures plus an optional coupling graph over gesture
/// indices. With coupling, onsets are computed and must be omitted; without
/// it, every gesture needs `onset_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreDocument {
    pub gestures: Vec<GestureEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingSpec>,
}

impl ScoreDocument {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let raw: RawScore = serde_json::from_str(text).map_err(json_err(path))?;
        let mut gestures = Vec::with_capacity(raw.gestures.len());
        for (i, value) in raw.gestures.iter().enumerate() {
            let line = line_of(text, value.get());
            let at = |msg: String| Error::Validation(format!("{}: line {line}: gesture {i}: {msg}", path.display()));
            let entry: GestureEntry = serde_json::from_str(value.get()).map_err(|e| at(e.to_string()))?;
            GestureParams::new(entry.target, entry.k, entry.d, entry.blending_strength)
                .map_err(|e| at(e.to_string()))?;
            Activation::new(entry.onset_s.unwrap_or(0.0), entry.duration_s).map_err(|e| at(e.to_string()))?;
            gestures.push(entry);
        }
        Ok(ScoreDocument {
            gestures,
            coupling: raw.coupling,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?, path)
    }

    pub fn from_score(score: &GestureScore) -> Self {
        ScoreDocument {
            gestures: score
                .gestures
                .iter()
                .map(|g| GestureEntry {
                    tract_variable: g.tract_variable.clone(),
                    target: g.params.target(),
                    k: g.params.stiffness(),
                    d: g.params.cubic_d(),
                    blending_strength: g.params.blending_strength(),
                    onset_s: Some(g.activation.onset_s),
                    duration_s: g.activation.duration_s(),
                    role: g.role,
                })
                .collect(),
            coupling: None,
        }
    }

    /// Resolves activation times and builds the score.
    pub fn to_score(&self) -> Result<GestureScore> {
        if self.gestures.is_empty() {
            return Err(Error::EmptyScore);
        }
        let onsets: Vec<f64> = match &self.coupling {
            Some(spec) => {
                if let Some(i) = self.gestures.iter().position(|g| g.onset_s.is_some()) {
                    return Err(Error::Validation(format!(
                        "gesture {i}: `onset_s` must be omitted when `coupling` is given"
                    )));
                }
                let graph = CouplingGraph::from_spec(self.gestures.len(), spec)?;
                let durations: Vec<f64> = self.gestures.iter().map(|g| g.duration_s).collect();
                let mut onsets = vec![0.0; self.gestures.len()];
                for slot in resolve_schedule(&graph, &durations)? {
                    onsets[slot.gesture] = slot.activation.onset_s;
                }
                onsets
            }
            None => self
                .gestures
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    g.onset_s.ok_or_else(|| {
                        Error::Validation(format!("gesture {i}: `onset_s` is required without `coupling`"))
                    })
                })
                .collect::<Result<_>>()?,
        };
        let gestures = self
            .gestures
            .iter()
            .zip(onsets)
            .map(|(g, onset)| {
                Ok(Gesture {
                    tract_variable: g.tract_variable.clone(),
                    params: GestureParams::new(g.target, g.k, g.d, g.blending_strength)?,
                    activation: Activation::new(onset, g.duration_s)?,
                    role: g.role,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GestureScore::new(gestures))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SimRow {
    time_s: f64,
    position: f64,
    velocity: f64,
    active_count: usize,
}

pub fn sim_output_csv(out: &SimOutput) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for i in 0..out.len() {
        w.serialize(SimRow {
            time_s: out.time[i],
            position: out.position[i],
            velocity: out.velocity[i],
            active_count: out.active_count[i],
        })
        .map_err(csv_err(Path::new("<memory>")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn read_sim_output(path: &Path) -> Result<SimOutput> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let mut out = SimOutput {
        time: Vec::new(),
        position: Vec::new(),
        velocity: Vec::new(),
        active_count: Vec::new(),
        dt: 0.0,
    };
    for row in r.deserialize() {
        let row: SimRow = row.map_err(csv_err(path))?;
        out.time.push(row.time_s);
        out.position.push(row.position);
        out.velocity.push(row.velocity);
        out.active_count.push(row.active_count);
    }
    if out.time.len() < 2 {
        return Err(Error::TooShort {
            len: out.time.len(),
            min: 2,
        });
    }
    out.dt = out.time[1] - out.time[0];
    Ok(out)
}

/// Where a token's channels come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Articulatory,
    Acoustic,
    /// Acoustic channels derived from simulated tract variables.
    FormantProxy,
}

impl Modality {
    pub fn is_acoustic(self) -> bool {
        self != Modality::Articulatory
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub sample_rate_hz: f64,
    pub speaker: String,
    pub item: String,
    pub token_id: String,
    pub vowel_onset_s: f64,
    pub vowel_offset_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modality: Option<Modality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_s: Option<f64>,
}

pub fn trajectory_csv(t: &Trajectory) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["time_s".to_string()];
    header.extend(t.channel_names().map(str::to_string));
    w.write_record(&header).map_err(csv_err(Path::new("<memory>")))?;
    let fs = t.sample_rate_hz();
    for i in 0..t.len() {
        let mut rec = vec![(i as f64 / fs).to_string()];
        rec.extend(t.channels().iter().map(|c| c.samples[i].to_string()));
        w.write_record(&rec).map_err(csv_err(Path::new("<memory>")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn read_channels(path: &Path) -> Result<Vec<Channel>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(str::to_string).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Validation(format!(
                    "{}: line {}: column `{}`: `{field}` is not a number",
                    path.display(),
                    line + 2,
                    header[c]
                ))
            })?;
            columns[c].push(v);
        }
    }
    Ok(header
        .into_iter()
        .zip(columns)
        .filter(|(name, _)| name != "time_s")
        .map(|(name, samples)| Channel { name, samples })
        .collect())
}

pub fn read_token(csv_path: &Path, sidecar_path: &Path) -> Result<(VowelToken, Modality)> {
    let side: Sidecar = read_json(sidecar_path)?;
    let channels = read_channels(csv_path)?;
    let modality = match side.modality {
        Some(m) => m,
        None if channels
            .iter()
            .any(|c| ARTICULATORY_CHANNELS.contains(&c.name.as_str())) =>
        {
            Modality::Articulatory
        }
        None if channels.iter().any(|c| FORMANT_CHANNELS.contains(&c.name.as_str())) => Modality::Acoustic,
        None => {
            return Err(Error::Validation(format!(
                "{}: no `modality` and no recognised channel names",
                sidecar_path.display()
            )))
        }
    };
    let tail = side.tail_s.unwrap_or(if modality.is_acoustic() {
        0.0
    } else {
        ARTICULATORY_TAIL_S
    });
    let traj = Trajectory::new(side.sample_rate_hz, channels, &side.speaker, &side.item, &side.token_id)?;
    Ok((
        VowelToken::new(traj, side.vowel_onset_s, side.vowel_offset_s, tail)?,
        modality,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub file: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadedCorpus {
    pub articulatory: Vec<VowelToken>,
    pub acoustic: Vec<VowelToken>,
    /// `true` when any acoustic token is a formant proxy.
    pub formant_proxy: bool,
    pub skipped: Vec<SkippedFile>,
}

/// Loads every `*.csv` in `dir` with its `*.json` sidecar. Files that fail
/// to load are skipped with a logged reason; a directory without any CSV is
/// an error.
pub fn load_corpus_dir(dir: &Path) -> Result<LoadedCorpus> {
    let mut csvs: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    csvs.sort();
    if csvs.is_empty() {
        return Err(Error::Validation(format!("{}: no trajectory CSV files", dir.display())));
    }
    let mut corpus = LoadedCorpus::default();
    for csv_path in csvs {
        let sidecar = csv_path.with_extension("json");
        let name = csv_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let loaded = if sidecar.exists() {
            read_token(&csv_path, &sidecar)
        } else {
            Err(Error::Validation("missing sidecar".into()))
        };
        match loaded {
            Ok((token, modality)) if modality.is_acoustic() => {
                corpus.formant_proxy |= modality == Modality::FormantProxy;
                corpus.acoustic.push(token);
            }
            Ok((token, _)) => corpus.articulatory.push(token),
            Err(e) => {
                warn!("skipping {name}: {e}");
                corpus.skipped.push(SkippedFile {
                    file: name,
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok(corpus)
}

pub fn sidecar_for(token: &VowelToken, modality: Modality) -> Sidecar {
    Sidecar {
        sample_rate_hz: token.trajectory.sample_rate_hz(),
        speaker: token.speaker().to_string(),
        item: token.item().to_string(),
        token_id: token.token_id().to_string(),
        vowel_onset_s: token.vowel_onset_s,
        vowel_offset_s: token.vowel_offset_s,
        modality: Some(modality),
        tail_s: Some(token.tail_s),
    }
}

pub fn serialize_rows<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err(Path::new("<memory>")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn read_measures(path: &Path) -> Result<Vec<DiphthongMeasures>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<DiphthongMeasures>, _>>()
        .map_err(csv_err(path))?;
    for m in &rows {
        let vals = [m.art_euclidean, m.art_pc1, m.ac_euclidean, m.ac_pc1, m.duration_s];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "{}: token `{}` has a non-finite measure",
                path.display(),
                m.token_id
            )));
        }
    }
    Ok(rows)
}

/// Token scores on every component, `token_id` first.
pub fn scores_csv(token_ids: &[String], model: &FpcaModel) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["token_id".to_string()];
    header.extend((1..=model.n_components()).map(|c| format!("pc{c}")));
    w.write_record(&header).map_err(csv_err(Path::new("<memory>")))?;
    for (id, row) in token_ids.iter().zip(&model.scores) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).map_err(csv_err(Path::new("<memory>")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Columns `t` (normalised time) and one named column per curve.
pub fn curves_csv(columns: &[(String, Vec<f64>)]) -> Result<Vec<u8>> {
    let n = columns.first().map_or(0, |c| c.1.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(columns.iter().map(|c| c.0.clone()));
    w.write_record(&header).map_err(csv_err(Path::new("<memory>")))?;
    for i in 0..n {
        let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        let mut rec = vec![t.to_string()];
        rec.extend(columns.iter().map(|c| c.1[i].to_string()));
        w.write_record(&rec).map_err(csv_err(Path::new("<memory>")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn assignment_csv(assignment: &BTreeMap<String, usize>) -> Result<Vec<u8>> {
    #[derive(Serialize)]
    struct Row<'a> {
        item: &'a str,
        cluster: usize,
    }
    serialize_rows(
        &assignment
            .iter()
            .map(|(item, &cluster)| Row { item, cluster })
            .collect::<Vec<_>>(),
    )
}

pub fn merges_csv(dendrogram: &Dendrogram) -> Result<Vec<u8>> {
    serialize_rows(&dendrogram.merges)
}

/// Output files collected in a temporary directory next to the destination
/// and moved into place by [`StagedOutput::commit`]. Dropping without
/// committing leaves the destination untouched.
pub struct StagedOutput {
    dest: PathBuf,
    stage: TempDir,
    files: Vec<String>,
}

impl StagedOutput {
    pub fn new(dest: &Path) -> Result<Self> {
        let parent = match dest.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent)?;
        let stage = tempfile::Builder::new().prefix(".staging-").tempdir_in(&parent)?;
        Ok(StagedOutput {
            dest: dest.to_path_buf(),
            stage,
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        if self.files.iter().any(|f| f == name) {
            return Err(Error::DuplicateLabel(name.to_string()));
        }
        fs::write(self.stage.path().join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, to_json_string(value))
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(&self.dest)?;
        let mut out = Vec::with_capacity(self.files.len());
        for f in &self.files {
            let to = self.dest.join(f);
            fs::rename(self.stage.path().join(f), &to)?;
            out.push(to);
        }
        Ok(out)
    }
}

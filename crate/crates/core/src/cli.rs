//! Command-line front end. Every command writes its outputs together with a
//! `manifest.json` that records the effective parameters; `replay` re-runs a
//! manifest and reproduces the outputs byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    default_d_upper, fit_cubic_d, simulate_score, SimulationConfig, SpeedCurve, DEFAULT_DT, DEFAULT_STIFFNESS,
};
use crate::error::{Error, Result};
use crate::fpca::{
    perturbation_curves, FpcaModel, DEFAULT_GRID_SIZE, DEFAULT_PERTURBATION_MULTIPLIERS, DEFAULT_RETAIN_FRACTION,
};
use crate::io::{self, Modality, ScoreDocument, StagedOutput};
use crate::kinematics::{DEFAULT_CUTOFF_HZ, DEFAULT_PROMINENCE_FRAC};
use crate::pipeline::studies::{StudyParams, OFFGLIDE_STRENGTH, STUDY_CUBIC_D};
use crate::pipeline::synthetic::{DEFAULT_NOISE_FRAC, DEFAULT_SEED, DEFAULT_SPEAKERS, PROXY_MODALITY};
use crate::pipeline::{
    cluster_items, compute_measures, duration_table, generate_corpus, item_means, measure_correlations,
    run_fig14_study, run_fig16_sweep, summarize_clusters, BranchResult, MeasureSubset, MeasuresConfig, SimulationStudy,
    SyntheticConfig,
};

pub const MANIFEST: &str = "manifest.json";
/// Items whose PC1 is oriented positive when present in the data.
pub const DEFAULT_REFERENCE_ITEMS: [&str; 4] = ["buy", "boy", "bough", "bay"];

#[derive(Debug, Parser)]
#[command(
    name = "diphthong",
    version,
    about = "Gesture simulation and vowel-dynamics measures"
)]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Simulate a built-in study or a score file.
    Simulate(SimulateArgs),
    /// Compute per-token measures from a directory of trajectories.
    Analyze(AnalyzeArgs),
    /// Ward-cluster items on their mean measures.
    Cluster(ClusterArgs),
    /// Fit the cubic stiffness of a score to a reference speed curve.
    FitD(FitDArgs),
    /// Write a seeded synthetic corpus.
    GenSynthetic(GenSyntheticArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Study {
    Fig14,
    Fig16,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long, conflicts_with = "score", required_unless_present = "score")]
    pub study: Option<Study>,
    /// Score JSON.
    #[arg(long)]
    pub score: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    /// Stiffness for study gestures.
    #[arg(long, default_value_t = DEFAULT_STIFFNESS)]
    pub k: f64,
    /// Cubic stiffness; for a score file, replaces every gesture's `d`.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = OFFGLIDE_STRENGTH)]
    pub offglide_strength: f64,
    #[arg(long, default_value_t = DEFAULT_PROMINENCE_FRAC)]
    pub prominence: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tail_s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub initial_position: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    /// Directory of trajectory CSVs with JSON sidecars.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CUTOFF_HZ)]
    pub cutoff_hz: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    #[arg(long, default_value_t = DEFAULT_RETAIN_FRACTION)]
    pub retain: f64,
    /// Items whose PC1 is made positive (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_REFERENCE_ITEMS.map(String::from))]
    pub reference_items: Vec<String>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ClusterArgs {
    /// Measures CSV written by `analyze`.
    #[arg(long)]
    pub measures: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = MeasureSubset::Combined)]
    pub subset: MeasureSubset,
    /// Directory holding `fpca_*.json`; defaults to the measures directory.
    #[arg(long)]
    pub models: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct FitDArgs {
    /// Reference CSV: simulation output (`time_s`, `velocity`, ...) or
    /// `time_s`, `speed`.
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub score: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    /// Upper bound; defaults to 0.9 k of the stiffest gesture.
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, default_value_t = 0.0)]
    pub initial_position: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tail_s: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GenSyntheticArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SPEAKERS)]
    pub speakers: usize,
    #[arg(long, default_value_t = 2)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_NOISE_FRAC)]
    pub noise: f64,
    #[arg(long, default_value_t = STUDY_CUBIC_D)]
    pub d: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    /// Fully resolved parameters, including defaults.
    pub effective: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub warnings: usize,
}

impl Command {
    fn out(&self) -> &Path {
        match self {
            Command::Simulate(a) => &a.out,
            Command::Analyze(a) => &a.out,
            Command::Cluster(a) => &a.out,
            Command::FitD(a) => &a.out,
            Command::GenSynthetic(a) => &a.out,
            Command::Replay(a) => &a.out,
        }
    }

    fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::Simulate(a) => a.out = out,
            Command::Analyze(a) => a.out = out,
            Command::Cluster(a) => a.out = out,
            Command::FitD(a) => a.out = out,
            Command::GenSynthetic(a) => a.out = out,
            Command::Replay(a) => a.out = out,
        }
    }
}

fn absolute(path: &Path) -> Result<PathBuf> {
    path.canonicalize()
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn finish(
    mut stage: StagedOutput,
    command: &Command,
    effective: serde_json::Value,
    seed: Option<u64>,
    warnings: usize,
) -> Result<RunReport> {
    let mut outputs = stage.files().to_vec();
    outputs.push(MANIFEST.to_string());
    let manifest = Manifest {
        tool: "diphthong".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.clone(),
        effective,
        seed,
        outputs,
    };
    stage.write_json(MANIFEST, &manifest)?;
    Ok(RunReport {
        files: stage.commit()?,
        warnings,
    })
}

fn effective<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("serialisable parameters")
}

pub fn run(command: Command) -> Result<RunReport> {
    if command.out().as_os_str().is_empty() {
        return Err(Error::Validation("`--out` is required".into()));
    }
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Analyze(a) => analyze(a),
        Command::Cluster(a) => cluster(a),
        Command::FitD(a) => fit_d(a),
        Command::GenSynthetic(a) => gen_synthetic(a),
        Command::Replay(a) => replay(a),
    }
}

fn sim_config(dt: f64, initial_position: f64, tail_s: f64) -> Result<SimulationConfig> {
    let cfg = SimulationConfig {
        dt,
        initial_position,
        initial_velocity: 0.0,
        tail_after_last_offset: tail_s,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct RunSummary<'a> {
    label: &'a str,
    item: &'a str,
    duration_s: f64,
    peak_count: usize,
    minima_count: usize,
    peak_times_s: Vec<f64>,
    peak_heights: Vec<f64>,
    second_peak_height: Option<f64>,
}

fn write_study(stage: &mut StagedOutput, study: &SimulationStudy) -> Result<()> {
    let mut summary = Vec::new();
    for r in &study.runs {
        stage.write(&format!("{}.csv", r.label), io::sim_output_csv(&r.output)?)?;
        stage.write_json(&format!("{}.score.json", r.label), &ScoreDocument::from_score(&r.score))?;
        summary.push(RunSummary {
            label: &r.label,
            item: &r.item,
            duration_s: r.duration_s,
            peak_count: r.peak_count(),
            minima_count: r.minima_count(),
            peak_times_s: r.peaks.iter().map(|p| r.output.time[p.index]).collect(),
            peak_heights: r.peaks.iter().map(|p| p.value).collect(),
            second_peak_height: r.second_peak_height,
        });
    }
    stage.write_json("summary.json", &summary)?;
    let durations = duration_table(study.runs.iter().map(|r| (r.label.as_str(), r.duration_s)))?;
    stage.write("durations.csv", durations_csv(&durations)?)?;
    Ok(())
}

fn durations_csv(table: &BTreeMap<String, crate::pipeline::DurationSummary>) -> Result<Vec<u8>> {
    #[derive(Serialize)]
    struct Row<'a> {
        group: &'a str,
        n: usize,
        mean: f64,
        sd: f64,
        min: f64,
        median: f64,
        max: f64,
    }
    io::serialize_rows(
        &table
            .iter()
            .map(|(g, d)| Row {
                group: g,
                n: d.n,
                mean: d.mean,
                sd: d.sd,
                min: d.min,
                median: d.median,
                max: d.max,
            })
            .collect::<Vec<_>>(),
    )
}

fn simulate(mut a: SimulateArgs) -> Result<RunReport> {
    let sim = sim_config(a.dt, a.initial_position, a.tail_s)?;
    let mut stage = StagedOutput::new(&a.out)?;
    let eff = if let Some(study) = a.study {
        let params = StudyParams {
            stiffness: a.k,
            cubic_d: a.d.unwrap_or(STUDY_CUBIC_D),
            offglide_strength: a.offglide_strength,
            prominence_frac: a.prominence,
            sim,
        };
        let result = match study {
            Study::Fig14 => run_fig14_study(&params)?,
            Study::Fig16 => run_fig16_sweep(&params)?,
        };
        write_study(&mut stage, &result)?;
        effective(&params)
    } else {
        let path = absolute(a.score.as_deref().expect("clap requires --score without --study"))?;
        let mut score = ScoreDocument::read(&path)?.to_score()?;
        if let Some(d) = a.d {
            score = score.with_cubic_d(d)?;
        }
        let out = simulate_score(&score, &sim)?;
        let speed = out.speed();
        let peaks = crate::kinematics::velocity_peaks(&speed, a.prominence);
        let minima = crate::kinematics::velocity_minima(&speed, a.prominence);
        stage.write("score.csv", io::sim_output_csv(&out)?)?;
        stage.write_json("score.score.json", &ScoreDocument::from_score(&score))?;
        stage.write_json(
            "summary.json",
            &[RunSummary {
                label: "score",
                item: "score",
                duration_s: out.driven_duration_s(),
                peak_count: peaks.len(),
                minima_count: minima.len(),
                peak_times_s: peaks.iter().map(|p| out.time[p.index]).collect(),
                peak_heights: peaks.iter().map(|p| p.value).collect(),
                second_peak_height: peaks.get(1).map(|p| p.value),
            }],
        )?;
        a.score = Some(path);
        effective(&serde_json::json!({ "sim": sim, "prominence_frac": a.prominence, "d": a.d }))
    };
    finish(stage, &Command::Simulate(a), eff, None, 0)
}

fn branch_outputs(stage: &mut StagedOutput, name: &str, branch: &BranchResult) -> Result<()> {
    stage.write(
        &format!("curves_{name}.csv"),
        io::curves_csv(
            &branch
                .token_ids
                .iter()
                .cloned()
                .zip(branch.curves.iter().cloned())
                .collect::<Vec<_>>(),
        )?,
    )?;
    let Some(model) = &branch.model else {
        warn!("{name}: no fPCA model (fewer than two tokens)");
        return Ok(());
    };
    stage.write_json(&format!("fpca_{name}.json"), model)?;
    stage.write(&format!("scores_{name}.csv"), io::scores_csv(&branch.token_ids, model)?)?;
    for c in 0..model.n_components().min(3) {
        let curves = perturbation_curves(model, c, &DEFAULT_PERTURBATION_MULTIPLIERS)?;
        let columns: Vec<(String, Vec<f64>)> = DEFAULT_PERTURBATION_MULTIPLIERS
            .iter()
            .zip(curves)
            .map(|(m, curve)| (format!("mean{m:+}sd"), curve))
            .collect();
        stage.write(
            &format!("perturbation_{name}_pc{}.csv", c + 1),
            io::curves_csv(&columns)?,
        )?;
    }
    Ok(())
}

fn analyze(mut a: AnalyzeArgs) -> Result<RunReport> {
    a.data = absolute(&a.data)?;
    let cfg = MeasuresConfig {
        cutoff_hz: a.cutoff_hz,
        grid_size: a.grid_size,
        retain_fraction: a.retain,
        reference_items: a.reference_items.clone(),
        ..MeasuresConfig::default()
    };
    cfg.validate()?;
    let corpus = io::load_corpus_dir(&a.data)?;
    if corpus.articulatory.is_empty() && corpus.acoustic.is_empty() {
        return Err(Error::Validation(format!("{}: no loadable tokens", a.data.display())));
    }
    if corpus.formant_proxy {
        warn!("acoustic tokens are a `{PROXY_MODALITY}` derived from simulated tract variables");
    }
    let report = compute_measures(&corpus.articulatory, &corpus.acoustic, &cfg)?;
    let mut stage = StagedOutput::new(&a.out)?;
    stage.write("measures.csv", io::serialize_rows(&report.measures)?)?;

    #[derive(Serialize)]
    struct Skip<'a> {
        kind: &'a str,
        id: &'a str,
        reason: &'a str,
    }
    let mut skipped: Vec<Skip> = corpus
        .skipped
        .iter()
        .map(|s| Skip {
            kind: "file",
            id: &s.file,
            reason: &s.reason,
        })
        .collect();
    skipped.extend(report.skipped.iter().map(|s| Skip {
        kind: match s.branch {
            crate::pipeline::Branch::Articulatory => "articulatory",
            crate::pipeline::Branch::Acoustic => "acoustic",
        },
        id: &s.token_id,
        reason: &s.reason,
    }));
    let warnings = skipped.len();
    stage.write("skipped.csv", io::serialize_rows(&skipped)?)?;

    branch_outputs(&mut stage, "articulatory", &report.articulatory)?;
    branch_outputs(&mut stage, "acoustic", &report.acoustic)?;
    let means = item_means(&report.measures);
    stage.write("item_means.csv", io::serialize_rows(&means)?)?;
    match measure_correlations(&means) {
        Ok(m) => {
            let names = crate::pipeline::Measure::ALL.map(|m| m.name());
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec![""];
            header.extend(names);
            w.write_record(&header).map_err(|e| Error::Validation(e.to_string()))?;
            for (name, row) in names.iter().zip(m) {
                let mut rec = vec![name.to_string()];
                rec.extend(row.iter().map(f64::to_string));
                w.write_record(&rec).map_err(|e| Error::Validation(e.to_string()))?;
            }
            stage.write(
                "correlations.csv",
                w.into_inner().map_err(|e| Error::Io(e.into_error()))?,
            )?;
        }
        Err(e) => warn!("correlation matrix not written: {e}"),
    }
    if !report.measures.is_empty() {
        let table = duration_table(report.measures.iter().map(|m| (m.item.as_str(), m.duration_s)))?;
        stage.write("durations.csv", durations_csv(&table)?)?;
    }
    let eff = effective(&cfg);
    finish(stage, &Command::Analyze(a), eff, None, warnings)
}

fn load_model(dir: &Path, name: &str) -> Result<Option<FpcaModel>> {
    let path = dir.join(format!("fpca_{name}.json"));
    if path.exists() {
        io::read_json(&path).map(Some)
    } else {
        Ok(None)
    }
}

fn cluster(mut a: ClusterArgs) -> Result<RunReport> {
    a.measures = absolute(&a.measures)?;
    let models_dir = match &a.models {
        Some(d) => absolute(d)?,
        None => a.measures.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    a.models = Some(models_dir.clone());
    let measures = io::read_measures(&a.measures)?;
    let means = item_means(&measures);
    if means.len() < 2 {
        return Err(Error::Validation(format!("need at least 2 items, got {}", means.len())));
    }
    let result = cluster_items(&means, a.subset, a.k)?;
    let art = load_model(&models_dir, "articulatory")?;
    let ac = load_model(&models_dir, "acoustic")?;
    let summaries = summarize_clusters(&measures, &result.assignment, art.as_ref(), ac.as_ref())?;

    let mut stage = StagedOutput::new(&a.out)?;
    stage.write_json("dendrogram.json", &result.dendrogram)?;
    stage.write("merges.csv", io::merges_csv(&result.dendrogram)?)?;
    stage.write("assignment.csv", io::assignment_csv(&result.assignment)?)?;
    stage.write_json("clusters.json", &summaries)?;
    let eff = effective(&serde_json::json!({
        "k": a.k,
        "subset": a.subset,
        "columns": a.subset.measures().iter().map(|m| m.name()).collect::<Vec<_>>(),
        "standardized": true,
    }));
    finish(stage, &Command::Cluster(a), eff, None, 0)
}

fn read_reference(path: &Path) -> Result<SpeedCurve> {
    let mut r = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let header = r
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let t_col = col("time_s").ok_or_else(|| Error::Validation(format!("{}: no `time_s` column", path.display())))?;
    let (v_col, absolute) = match (col("speed"), col("velocity")) {
        (Some(c), _) => (c, false),
        (None, Some(c)) => (c, true),
        _ => {
            return Err(Error::Validation(format!(
                "{}: need a `speed` or `velocity` column",
                path.display()
            )))
        }
    };
    let mut curve = SpeedCurve {
        time: Vec::new(),
        speed: Vec::new(),
    };
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let parse = |c: usize| -> Result<f64> {
            rec.get(c).and_then(|f| f.trim().parse().ok()).ok_or_else(|| {
                Error::Validation(format!(
                    "{}: line {}: not a number in column {}",
                    path.display(),
                    line + 2,
                    c + 1
                ))
            })
        };
        curve.time.push(parse(t_col)?);
        let v = parse(v_col)?;
        curve.speed.push(if absolute { v.abs() } else { v });
    }
    Ok(curve)
}

fn fit_d(mut a: FitDArgs) -> Result<RunReport> {
    a.reference = absolute(&a.reference)?;
    a.score = absolute(&a.score)?;
    let sim = sim_config(a.dt, a.initial_position, a.tail_s)?;
    let reference = read_reference(&a.reference)?;
    let score = ScoreDocument::read(&a.score)?.to_score()?;
    let k_max = score.gestures.iter().map(|g| g.params.stiffness()).fold(0.0, f64::max);
    let hi = a.hi.unwrap_or_else(|| default_d_upper(k_max));
    a.hi = Some(hi);
    let d = fit_cubic_d(&reference, &score, &sim, (a.lo, hi))?;
    let fitted_score = score.with_cubic_d(d)?;
    let fitted = simulate_score(&fitted_score, &sim)?;
    let reference_ratio = reference.time_to_peak_ratio();
    let fitted_ratio = SpeedCurve::from(&fitted).time_to_peak_ratio();
    info!("fitted d = {d}");

    let mut stage = StagedOutput::new(&a.out)?;
    stage.write_json(
        "fit.json",
        &serde_json::json!({
            "d": d,
            "bounds": [a.lo, hi],
            "reference_ratio": reference_ratio,
            "fitted_ratio": fitted_ratio,
        }),
    )?;
    stage.write("fitted.csv", io::sim_output_csv(&fitted)?)?;
    stage.write_json("fitted.score.json", &ScoreDocument::from_score(&fitted_score))?;
    let eff = effective(&serde_json::json!({ "sim": sim, "bounds": [a.lo, hi] }));
    finish(stage, &Command::FitD(a), eff, None, 0)
}

fn gen_synthetic(a: GenSyntheticArgs) -> Result<RunReport> {
    let mut config = SyntheticConfig {
        seed: a.seed,
        n_speakers: a.speakers,
        reps_per_speaker: a.reps,
        noise_frac: a.noise,
        ..SyntheticConfig::default()
    };
    config.study.cubic_d = a.d;
    let corpus = generate_corpus(&config)?;
    let mut stage = StagedOutput::new(&a.out)?;
    for (tokens, suffix, modality) in [
        (&corpus.articulatory, "art", Modality::Articulatory),
        (&corpus.acoustic, "ac", Modality::FormantProxy),
    ] {
        for t in tokens {
            let stem = format!("{}_{suffix}", t.token_id());
            stage.write(&format!("{stem}.csv"), io::trajectory_csv(&t.trajectory)?)?;
            stage.write_json(&format!("{stem}.json"), &io::sidecar_for(t, modality))?;
        }
    }
    stage.write_json("items.json", &corpus.config.items)?;
    let eff = effective(&config);
    finish(stage, &Command::GenSynthetic(a.clone()), eff, Some(a.seed), 0)
}

fn replay(a: ReplayArgs) -> Result<RunReport> {
    let manifest: Manifest = io::read_json(&a.manifest)?;
    let mut command = manifest.command;
    if matches!(command, Command::Replay(_)) {
        return Err(Error::Validation("a manifest cannot record `replay`".into()));
    }
    command.set_out(a.out);
    run(command)
}

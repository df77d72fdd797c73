//! End to end on the synthetic corpus: measures per token, item means,
//! correlations, a three-way Ward cut and per-cluster summaries.

use diphthong_dynamics::pipeline::{
    cluster_items, compute_measures, generate_corpus, item_means, measure_correlations, spearman, summarize_clusters,
    ItemClass, MeasureSubset, MeasuresConfig, SyntheticConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_corpus(&SyntheticConfig::default())?;
    let cfg = MeasuresConfig {
        reference_items: corpus.reference_items(),
        ..MeasuresConfig::default()
    };
    let report = compute_measures(&corpus.articulatory, &corpus.acoustic, &cfg)?;
    println!(
        "{} tokens measured, {} skipped",
        report.measures.len(),
        report.skipped.len()
    );

    let means = item_means(&report.measures);
    println!(
        "{:<6} {:>8} {:>9} {:>8} {:>9}",
        "item", "artED", "artPC1", "acED", "acPC1"
    );
    for m in &means {
        println!(
            "{:<6} {:>8.3} {:>9.2} {:>8.3} {:>9.2}",
            m.item, m.art_euclidean, m.art_pc1, m.ac_euclidean, m.ac_pc1
        );
    }
    for row in measure_correlations(&means)? {
        println!(
            "corr {:?}",
            row.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        );
    }

    for subset in [
        MeasureSubset::Combined,
        MeasureSubset::Articulatory,
        MeasureSubset::Acoustic,
    ] {
        let c = cluster_items(&means, subset, 3)?;
        println!("{subset:?}: {:?}", c.assignment);
    }

    let combined = cluster_items(&means, MeasureSubset::Combined, 3)?;
    let summaries = summarize_clusters(
        &report.measures,
        &combined.assignment,
        report.articulatory.model.as_ref(),
        report.acoustic.model.as_ref(),
    )?;
    for s in &summaries {
        let peak = s.art_curve.iter().copied().fold(f64::MIN, f64::max);
        println!(
            "cluster {} {:?}: reconstructed articulatory speed peaks at {peak:.3}",
            s.cluster, s.items
        );
    }

    let sweep: Vec<(f64, f64)> = means
        .iter()
        .filter_map(|m| {
            let item = corpus.item(&m.item)?;
            (item.class == ItemClass::Intermediate).then(|| (item.offset(), m.art_pc1))
        })
        .collect();
    let (offsets, pc1): (Vec<f64>, Vec<f64>) = sweep.into_iter().unzip();
    println!(
        "spearman(offset, art_pc1) over the sweep: {:?}",
        spearman(&offsets, &pc1)
    );
    Ok(())
}

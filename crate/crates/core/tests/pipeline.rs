use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use diphthong_dynamics::pipeline::{
    cluster_items, compute_measures, correlation_matrix, generate_corpus, item_means, ItemClass, ItemMeans,
    MeasureSubset, MeasuresConfig, MeasuresReport, SyntheticConfig, SyntheticCorpus,
};

fn study() -> &'static (SyntheticCorpus, MeasuresReport) {
    static CELL: OnceLock<(SyntheticCorpus, MeasuresReport)> = OnceLock::new();
    CELL.get_or_init(|| {
        let corpus = generate_corpus(&SyntheticConfig::default()).unwrap();
        let report = measure(&corpus);
        (corpus, report)
    })
}

fn measure(corpus: &SyntheticCorpus) -> MeasuresReport {
    let cfg = MeasuresConfig {
        reference_items: corpus.reference_items(),
        ..MeasuresConfig::default()
    };
    compute_measures(&corpus.articulatory, &corpus.acoustic, &cfg).unwrap()
}

fn class_of(corpus: &SyntheticCorpus, item: &str) -> ItemClass {
    corpus.item(item).unwrap().class
}

#[test]
fn pc1_separates_one_and_two_target_vowels() {
    let (corpus, report) = study();
    let pick = |class| -> Vec<f64> {
        report
            .measures
            .iter()
            .filter(|m| class_of(corpus, &m.item) == class)
            .map(|m| m.art_pc1)
            .collect()
    };
    let (mono, di) = (pick(ItemClass::Monophthong), pick(ItemClass::Diphthong));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let threshold = 0.5 * (mean(&mono) + mean(&di));
    assert!(mono.iter().all(|v| *v < threshold));
    assert!(di.iter().all(|v| *v > threshold));
}

#[test]
fn displacement_grows_along_the_nucleus_sweep() {
    let (corpus, report) = study();
    let means = item_means(&report.measures);
    let mut sweep: Vec<(f64, &ItemMeans)> = means
        .iter()
        .filter(|m| class_of(corpus, &m.item) == ItemClass::Intermediate)
        .map(|m| (corpus.item(&m.item).unwrap().offset(), m))
        .collect();
    sweep.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert_eq!(sweep.len(), 3);
    assert!(sweep.windows(2).all(|w| w[1].1.art_euclidean > w[0].1.art_euclidean));
    assert!(sweep.windows(2).all(|w| w[1].1.ac_euclidean > w[0].1.ac_euclidean));
}

#[test]
fn measures_table_is_reproducible() {
    let (_, report) = study();
    let again = measure(&generate_corpus(&SyntheticConfig::default()).unwrap());
    assert_eq!(report.measures, again.measures);

    let other = measure(
        &generate_corpus(&SyntheticConfig {
            seed: 1,
            ..SyntheticConfig::default()
        })
        .unwrap(),
    );
    assert_ne!(report.measures, other.measures);
}

#[test]
fn every_token_pairs_across_branches() {
    let (corpus, report) = study();
    assert!(report.skipped.is_empty());
    assert_eq!(report.measures.len(), corpus.articulatory.len());
    assert_eq!(report.measures.len(), 9 * 6 * 2);
}

#[test]
fn articulatory_clustering_ignores_acoustic_columns() {
    let (_, report) = study();
    let means = item_means(&report.measures);
    let base = cluster_items(&means, MeasureSubset::Articulatory, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let scrambled: Vec<ItemMeans> = means
        .iter()
        .map(|m| ItemMeans {
            ac_euclidean: rng.random_range(0.0..10.0),
            ac_pc1: rng.random_range(-100.0..100.0),
            ..m.clone()
        })
        .collect();
    assert_eq!(base, cluster_items(&scrambled, MeasureSubset::Articulatory, 3).unwrap());
    let combined = cluster_items(&scrambled, MeasureSubset::Combined, 3).unwrap();
    assert_ne!(base.dendrogram, combined.dendrogram);
}

fn planted_pair(rng: &mut ChaCha8Rng, n: usize, rho: f64) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let noise = (1.0 - rho * rho).sqrt();
    let y = x
        .iter()
        .map(|v| rho * v + noise * rng.sample::<f64, _>(StandardNormal))
        .collect();
    (x, y)
}

#[test]
fn correlation_matches_direct_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (x, y) = planted_pair(&mut rng, 50, 0.4);
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r = correlation_matrix(&[("x", x), ("y", y)]).unwrap();
    assert!((r[0][1] - sxy / (sxx * syy).sqrt()).abs() < 1e-12);
    assert_eq!(r[0][1], r[1][0]);
    assert_eq!(r[0][0], 1.0);
}

/// At n = 200 the sampling SD of r around 0.8 is about 0.025, so roughly
/// 95% of draws land within 0.05.
#[test]
fn planted_correlation_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 400;
    let mut within = 0;
    let mut sum = 0.0;
    for _ in 0..trials {
        let (x, y) = planted_pair(&mut rng, 200, 0.8);
        let r = correlation_matrix(&[("x", x), ("y", y)]).unwrap()[0][1];
        within += usize::from((r - 0.8).abs() < 0.05);
        sum += r;
    }
    let mean = sum / trials as f64;
    assert!((mean - 0.8).abs() < 0.005, "mean r = {mean}");
    assert!(within as f64 >= 0.9 * trials as f64, "{within}/{trials} within 0.05");
}

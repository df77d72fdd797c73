#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels sort in index order for up to 10 points.
pub fn labelled(points: &[Vec<f64>]) -> Vec<(String, Vec<f64>)> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("p{i}"), p.clone()))
        .collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ess(points: &[Vec<f64>], members: &BTreeSet<usize>) -> f64 {
    let dim = points[0].len();
    let n = members.len() as f64;
    let mut centroid = vec![0.0; dim];
    for &m in members {
        for (c, x) in centroid.iter_mut().zip(&points[m]) {
            *c += x / n;
        }
    }
    members
        .iter()
        .map(|&m| {
            points[m]
                .iter()
                .zip(&centroid)
                .map(|(x, c)| (x - c).powi(2))
                .sum::<f64>()
        })
        .sum()
}

/// Ward by exhaustive search: at every step merge the pair whose union
/// raises the total within-cluster sum of squares least. Heights are
/// `sqrt(2 * increase)`.
pub fn brute_force_ward(points: &[Vec<f64>]) -> Vec<(BTreeSet<usize>, f64)> {
    let mut clusters: Vec<BTreeSet<usize>> = (0..points.len()).map(|i| BTreeSet::from([i])).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let union: BTreeSet<usize> = clusters[i].union(&clusters[j]).copied().collect();
                let inc = ess(points, &union) - ess(points, &clusters[i]) - ess(points, &clusters[j]);
                if inc < best.0 {
                    best = (inc, i, j);
                }
            }
        }
        let (inc, i, j) = best;
        let b = clusters.remove(j);
        let a = clusters.remove(i);
        let union: BTreeSet<usize> = a.union(&b).copied().collect();
        out.push((union.clone(), (2.0 * inc).max(0.0).sqrt()));
        clusters.push(union);
    }
    out
}

/// Leaf sets formed by each merge of a dendrogram.
pub fn merge_sets(d: &diphthong_dynamics::clustering::Dendrogram) -> Vec<BTreeSet<usize>> {
    let n = d.n_leaves();
    let mut sets: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    for m in &d.merges {
        let union = sets[m.cluster_a].union(&sets[m.cluster_b]).copied().collect();
        sets.push(union);
    }
    sets.split_off(n)
}

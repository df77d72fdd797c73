//! Agglomerative clustering with Ward's criterion.
//!
//! Points are sorted by label before clustering, so leaf `i` is the `i`-th
//! label in lexicographic order and the result does not depend on input
//! order. Cluster ids follow the usual convention: leaves are `0..n`, the
//! cluster formed by merge `s` is `n + s`.
//!
//! Dissimilarities are squared Euclidean distances updated with the
//! Lance-Williams recurrence for Ward's method. A merge height is the square
//! root of the updated dissimilarity, which for two singletons is their
//! Euclidean distance and in general equals `sqrt(2 * increase in
//! within-cluster sum of squares)`. Ties go to the pair whose smallest leaves
//! come first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    /// Pairwise Euclidean distances between labelled points.
    pub fn euclidean(points: &[(String, Vec<f64>)]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.1.len());
        for (label, v) in points {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!(
                    "point `{label}` has a non-finite coordinate"
                )));
            }
        }
        let d = points
            .iter()
            .map(|(_, a)| points.iter().map(|(_, b)| squared(a, b).sqrt()).collect())
            .collect();
        Ok(DistanceMatrix {
            labels: points.iter().map(|p| p.0.clone()).collect(),
            d,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub cluster_a: usize,
    pub cluster_b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
    pub leaf_labels: Vec<String>,
}

impl Dendrogram {
    pub fn n_leaves(&self) -> usize {
        self.leaf_labels.len()
    }
}

fn squared(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn sorted_points(points: &[(String, Vec<f64>)]) -> Result<Vec<(String, Vec<f64>)>> {
    if points.len() < 2 {
        return Err(Error::param(
            "points",
            format!("need at least 2 points, got {}", points.len()),
        ));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateLabel(w[0].0.clone()));
        }
    }
    let dim = sorted[0].1.len();
    if dim == 0 {
        return Err(Error::param("points", "zero-dimensional points"));
    }
    for (label, v) in &sorted {
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(format!(
                "point `{label}` has a non-finite coordinate"
            )));
        }
    }
    Ok(sorted)
}

struct Active {
    id: usize,
    size: usize,
    first_leaf: usize,
}

pub fn ward_linkage(points: &[(String, Vec<f64>)]) -> Result<Dendrogram> {
    let sorted = sorted_points(points)?;
    let n = sorted.len();
    let mut dist: Vec<Vec<f64>> = sorted
        .iter()
        .map(|(_, a)| sorted.iter().map(|(_, b)| squared(a, b)).collect())
        .collect();
    let mut active: Vec<Option<Active>> = (0..n)
        .map(|i| {
            Some(Active {
                id: i,
                size: 1,
                first_leaf: i,
            })
        })
        .collect();

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for i in 0..n {
            let Some(ci) = &active[i] else { continue };
            for j in (i + 1)..n {
                let Some(cj) = &active[j] else { continue };
                let key = (ci.first_leaf.min(cj.first_leaf), ci.first_leaf.max(cj.first_leaf));
                let better = match best {
                    None => true,
                    Some((d, k, _, _)) => dist[i][j] < d || (dist[i][j] == d && key < k),
                };
                if better {
                    best = Some((dist[i][j], key, i, j));
                }
            }
        }
        let (d_ij, _, i, j) = best.expect("at least two active clusters");
        let ci = active[i].take().expect("active");
        let cj = active[j].take().expect("active");
        let (ni, nj) = (ci.size as f64, cj.size as f64);
        for k in 0..n {
            let Some(ck) = &active[k] else { continue };
            let nk = ck.size as f64;
            let updated = ((ni + nk) * dist[k][i] + (nj + nk) * dist[k][j] - nk * d_ij) / (ni + nj + nk);
            dist[k][i] = updated;
            dist[i][k] = updated;
        }
        merges.push(Merge {
            cluster_a: ci.id.min(cj.id),
            cluster_b: ci.id.max(cj.id),
            height: d_ij.max(0.0).sqrt(),
            size: ci.size + cj.size,
        });
        active[i] = Some(Active {
            id: n + step,
            size: ci.size + cj.size,
            first_leaf: ci.first_leaf.min(cj.first_leaf),
        });
    }
    Ok(Dendrogram {
        merges,
        leaf_labels: sorted.into_iter().map(|p| p.0).collect(),
    })
}

/// Undoes the `k - 1` highest merges. Cluster ids are numbered in order of
/// first appearance along the (sorted) leaf labels.
pub fn cut_tree(dendrogram: &Dendrogram, k: usize) -> Result<BTreeMap<String, usize>> {
    let n = dendrogram.n_leaves();
    if k < 1 || k > n {
        return Err(Error::ClusterCount { k, n });
    }
    // union-find over cluster ids
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (step, m) in dendrogram.merges.iter().take(n - k).enumerate() {
        let new = n + step;
        let a = root(&mut parent, m.cluster_a);
        let b = root(&mut parent, m.cluster_b);
        parent[a] = new;
        parent[b] = new;
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (leaf, label) in dendrogram.leaf_labels.iter().enumerate() {
        let r = root(&mut parent, leaf);
        let next = ids.len();
        let id = *ids.entry(r).or_insert(next);
        out.insert(label.clone(), id);
    }
    Ok(out)
}

/// Column-wise z-scores (population SD) across rows. Fails on a constant
/// column.
pub fn standardize_columns(rows: &[Vec<f64>], column_names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let n = rows.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dim = rows[0].len();
    let mut out = rows.to_vec();
    for c in 0..dim {
        let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n as f64;
        let sd = (rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        if sd.is_nan() || sd <= 0.0 {
            let name = column_names.get(c).map_or_else(|| c.to_string(), |s| s.to_string());
            return Err(Error::ZeroVariance(name));
        }
        for r in &mut out {
            r[c] = (r[c] - mean) / sd;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(&str, &[f64])]) -> Vec<(String, Vec<f64>)> {
        v.iter().map(|(l, x)| (l.to_string(), x.to_vec())).collect()
    }

    #[test]
    fn identical_pair() {
        let d = ward_linkage(&pts(&[("a", &[1.0, 2.0]), ("b", &[1.0, 2.0])])).unwrap();
        assert_eq!(d.merges.len(), 1);
        assert_eq!(d.merges[0].height, 0.0);
        assert_eq!(d.merges[0].size, 2);
    }

    #[test]
    fn collinear_hand_computed() {
        let d = ward_linkage(&pts(&[("p0", &[0.0]), ("p1", &[1.0]), ("p10", &[10.0])])).unwrap();
        // sorted labels: p0, p1, p10
        assert_eq!((d.merges[0].cluster_a, d.merges[0].cluster_b), (0, 1));
        assert!((d.merges[0].height - 1.0).abs() < 1e-12);
        assert_eq!((d.merges[1].cluster_a, d.merges[1].cluster_b), (2, 3));
        // centroid 0.5 vs 10: 2 * (2*1/3) * 9.5^2
        let want = (2.0 * 2.0 / 3.0 * 9.5f64 * 9.5).sqrt();
        assert!((d.merges[1].height - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            ward_linkage(&pts(&[("a", &[1.0]), ("a", &[2.0])])),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            ward_linkage(&pts(&[("a", &[1.0]), ("b", &[2.0, 3.0])])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(ward_linkage(&pts(&[("a", &[1.0])])).is_err());
    }

    #[test]
    fn cut_extremes() {
        let d = ward_linkage(&pts(&[("a", &[0.0]), ("b", &[1.0]), ("c", &[5.0]), ("d", &[9.0])])).unwrap();
        let singletons = cut_tree(&d, 4).unwrap();
        assert_eq!(singletons.values().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let one = cut_tree(&d, 1).unwrap();
        assert!(one.values().all(|&c| c == 0));
        assert!(matches!(cut_tree(&d, 0), Err(Error::ClusterCount { .. })));
        assert!(matches!(cut_tree(&d, 5), Err(Error::ClusterCount { .. })));
    }

    #[test]
    fn three_blobs() {
        let mut points = Vec::new();
        let centres = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)];
        for (b, (cx, cy)) in centres.iter().enumerate() {
            for (k, (dx, dy)) in [(0.1, 0.0), (-0.1, 0.05), (0.0, -0.1), (0.05, 0.1)].iter().enumerate() {
                points.push((format!("b{b}-{k}"), vec![cx + dx, cy + dy]));
            }
        }
        let d = ward_linkage(&points).unwrap();
        let cut = cut_tree(&d, 3).unwrap();
        for (label, id) in &cut {
            let blob: usize = label[1..2].parse().unwrap();
            assert_eq!(*id, blob, "{label}");
        }
    }

    #[test]
    fn standardize() {
        let z = standardize_columns(&[vec![1.0, 5.0], vec![3.0, 5.5]], &["x", "y"]).unwrap();
        assert_eq!(z, vec![vec![-1.0, -1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            standardize_columns(&[vec![1.0, 2.0], vec![1.0, 3.0]], &["x", "y"]),
            Err(Error::ZeroVariance(c)) if c == "x"
        ));
    }

    #[test]
    fn euclidean_matrix() {
        let m = DistanceMatrix::euclidean(&pts(&[("a", &[0.0, 0.0]), ("b", &[3.0, 4.0])])).unwrap();
        assert_eq!(m.d, vec![vec![0.0, 5.0], vec![5.0, 0.0]]);
    }
}

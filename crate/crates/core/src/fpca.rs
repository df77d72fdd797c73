//! Functional PCA of curves sampled on a shared grid.
//!
//! Curves are centred on their mean and decomposed by SVD. Components are
//! orthonormal under the plain dot product over grid points, scores are the
//! projections of centred curves, and eigenvalues are score variances with an
//! `n - 1` denominator. Each component is signed so that its
//! largest-magnitude element is positive.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_SIZE: usize = 101;
pub const DEFAULT_RETAIN_FRACTION: f64 = 0.99;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FpcaModel {
    pub grid_size: usize,
    pub mean: Vec<f64>,
    /// Every numerically non-zero component, in decreasing eigenvalue order.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    /// Fraction of total variance per component; sums to 1.
    pub variance_explained: Vec<f64>,
    /// Training scores, one row per input curve.
    pub scores: Vec<Vec<f64>>,
    /// Smallest number of leading components reaching the retain fraction.
    pub n_retained: usize,
}

pub fn fpca_fit(curves: &[Vec<f64>]) -> Result<FpcaModel> {
    fpca_fit_with(curves, DEFAULT_RETAIN_FRACTION)
}

pub fn fpca_fit_with(curves: &[Vec<f64>], retain_fraction: f64) -> Result<FpcaModel> {
    if curves.len() < 2 {
        return Err(Error::param(
            "curves",
            format!("need at least 2 curves, got {}", curves.len()),
        ));
    }
    if !(retain_fraction > 0.0 && retain_fraction <= 1.0) {
        return Err(Error::param(
            "retain_fraction",
            format!("{retain_fraction} must be in (0, 1]"),
        ));
    }
    let n = curves.len();
    let grid = curves[0].len();
    if grid < 2 {
        return Err(Error::param("curves", "grid must have at least 2 points"));
    }
    for c in curves {
        if c.len() != grid {
            return Err(Error::LengthMismatch {
                expected: grid,
                actual: c.len(),
            });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("curves", "non-finite value"));
        }
    }

    // offsets from the first curve keep the mean exact for identical curves
    let mean: Vec<f64> = (0..grid)
        .map(|g| curves[0][g] + curves.iter().map(|c| c[g] - curves[0][g]).sum::<f64>() / n as f64)
        .collect();
    let centred = Mat::from_fn(n, grid, |r, g| curves[r][g] - mean[g]);
    let scale = curves.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));

    let svd = centred.thin_svd().map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let singular = svd.S().column_vector();
    let v = svd.V();
    let mut order: Vec<usize> = (0..singular.nrows()).collect();
    order.sort_by(|&a, &b| singular[b].total_cmp(&singular[a]));
    let s_max = order.first().map_or(0.0, |&i| singular[i]);
    let tol = n.max(grid) as f64 * f64::EPSILON * s_max.max(scale * ((n * grid) as f64).sqrt());

    let mut components = Vec::new();
    let mut eigenvalues = Vec::new();
    for &i in &order {
        let s = singular[i];
        if s <= tol {
            break;
        }
        let mut comp: Vec<f64> = (0..grid).map(|g| v[(g, i)]).collect();
        let pivot = comp
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            comp.iter_mut().for_each(|v| *v = -*v);
        }
        components.push(comp);
        eigenvalues.push(s * s / (n - 1) as f64);
    }

    let total: f64 = eigenvalues.iter().sum();
    let variance_explained: Vec<f64> = eigenvalues.iter().map(|e| e / total).collect();
    let mut cumulative = 0.0;
    let n_retained = variance_explained
        .iter()
        .position(|v| {
            cumulative += v;
            cumulative >= retain_fraction - 1e-12
        })
        .map_or(components.len(), |i| i + 1);

    let mut model = FpcaModel {
        grid_size: grid,
        mean,
        components,
        eigenvalues,
        variance_explained,
        scores: Vec::new(),
        n_retained,
    };
    model.scores = curves.iter().map(|c| fpca_project(&model, c)).collect::<Result<_>>()?;
    Ok(model)
}

/// Inner products of the centred curve with every component.
pub fn fpca_project(model: &FpcaModel, curve: &[f64]) -> Result<Vec<f64>> {
    if curve.len() != model.grid_size {
        return Err(Error::LengthMismatch {
            expected: model.grid_size,
            actual: curve.len(),
        });
    }
    Ok(model
        .components
        .iter()
        .map(|comp| {
            comp.iter()
                .zip(curve.iter().zip(&model.mean))
                .map(|(phi, (x, m))| phi * (x - m))
                .sum()
        })
        .collect())
}

/// Mean plus the first `n_components` components weighted by `scores`.
pub fn fpca_reconstruct(model: &FpcaModel, scores: &[f64], n_components: usize) -> Result<Vec<f64>> {
    if n_components > model.n_components() {
        return Err(Error::param(
            "n_components",
            format!("{n_components} exceeds the {} available", model.n_components()),
        ));
    }
    if scores.len() < n_components {
        return Err(Error::LengthMismatch {
            expected: n_components,
            actual: scores.len(),
        });
    }
    let mut curve = model.mean.clone();
    for (comp, &s) in model.components.iter().zip(scores).take(n_components) {
        for (c, phi) in curve.iter_mut().zip(comp) {
            *c += s * phi;
        }
    }
    Ok(curve)
}

/// `mean + m * sqrt(eigenvalue) * component` for each multiplier `m`.
pub fn perturbation_curves(model: &FpcaModel, component_index: usize, multipliers: &[f64]) -> Result<Vec<Vec<f64>>> {
    let comp = model
        .components
        .get(component_index)
        .ok_or_else(|| Error::param("component_index", format!("{component_index} out of range")))?;
    let sd = model.eigenvalues[component_index].sqrt();
    Ok(multipliers
        .iter()
        .map(|m| model.mean.iter().zip(comp).map(|(mu, phi)| mu + m * sd * phi).collect())
        .collect())
}

pub const DEFAULT_PERTURBATION_MULTIPLIERS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

impl FpcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Training score of curve `row` on `component`, 0 for absent components.
    pub fn score(&self, row: usize, component: usize) -> f64 {
        self.scores
            .get(row)
            .and_then(|s| s.get(component))
            .copied()
            .unwrap_or(0.0)
    }

    /// Flips a component's sign, together with its scores.
    pub fn flip(&mut self, component: usize) {
        if let Some(comp) = self.components.get_mut(component) {
            comp.iter_mut().for_each(|v| *v = -*v);
            for row in &mut self.scores {
                row[component] = -row[component];
            }
        }
    }

    /// Orients `component` so that the mean training score of `rows` is
    /// non-negative. Returns whether the sign was flipped.
    pub fn orient(&mut self, component: usize, rows: &[usize]) -> bool {
        if component >= self.n_components() || rows.is_empty() {
            return false;
        }
        let mean = rows.iter().map(|&r| self.score(r, component)).sum::<f64>() / rows.len() as f64;
        if mean < 0.0 {
            self.flip(component);
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(g: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..g).map(|i| f(i as f64 / (g - 1) as f64)).collect()
    }

    fn unit(v: Vec<f64>) -> Vec<f64> {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }

    #[test]
    fn identical_curves_have_no_components() {
        let c = shape(11, |t| 0.1 * t + 0.3);
        let m = fpca_fit(&[c.clone(), c.clone(), c.clone()]).unwrap();
        assert_eq!(m.n_components(), 0);
        assert_eq!(m.mean, c);
        assert!(m.scores.iter().all(|s| s.is_empty()));
        assert_eq!(m.score(0, 0), 0.0);
    }

    #[test]
    fn rank_one_family() {
        let mean = shape(21, |t| t * t);
        let s = shape(21, |t| (3.0 * t).sin());
        let curves: Vec<Vec<f64>> = [-1.0, 1.0, 2.0, -2.0]
            .iter()
            .map(|a| mean.iter().zip(&s).map(|(m, v)| m + a * v).collect())
            .collect();
        let m = fpca_fit(&curves).unwrap();
        assert_eq!(m.n_components(), 1);
        assert!((m.variance_explained[0] - 1.0).abs() < 1e-12);
        let s_unit = unit(s);
        let dot: f64 = m.components[0].iter().zip(&s_unit).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constructed_spectrum() {
        let g = 51;
        let a = unit(shape(g, |t| (std::f64::consts::PI * t).sin()));
        let b = unit(shape(g, |t| (2.0 * std::f64::consts::PI * t).sin()));
        // scores with zero mean, no correlation, sample variances 4 and 1
        let sa = [2.0, -2.0, 2.0, -2.0, 0.0, 0.0, 0.0, 0.0];
        let sb = [0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 1.0, -1.0];
        let scale_a = (4.0 * 7.0 / 16.0f64).sqrt();
        let scale_b = (7.0 / 4.0f64).sqrt();
        let curves: Vec<Vec<f64>> = (0..8)
            .map(|r| {
                (0..g)
                    .map(|i| 5.0 + scale_a * sa[r] * a[i] + scale_b * sb[r] * b[i])
                    .collect()
            })
            .collect();
        let m = fpca_fit(&curves).unwrap();
        assert_eq!(m.n_components(), 2);
        assert!((m.variance_explained[0] - 0.8).abs() < 1e-10);
        assert!((m.variance_explained[1] - 0.2).abs() < 1e-10);
        assert!((m.eigenvalues[0] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn project_mean_and_shifted_mean() {
        let curves: Vec<Vec<f64>> = (0..6)
            .map(|r| shape(15, |t| (t * (r as f64 + 1.0)).cos() + r as f64 * t))
            .collect();
        let m = fpca_fit(&curves).unwrap();
        assert!(fpca_project(&m, &m.mean).unwrap().iter().all(|s| s.abs() < 1e-12));
        let shifted: Vec<f64> = m.mean.iter().zip(&m.components[0]).map(|(a, b)| a + 2.0 * b).collect();
        let s = fpca_project(&m, &shifted).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-10);
        assert!(s[1..].iter().all(|v| v.abs() < 1e-10));
        assert!(fpca_project(&m, &[0.0; 3]).is_err());
    }

    #[test]
    fn reconstruct_zero_scores_is_mean() {
        let curves: Vec<Vec<f64>> = (0..4).map(|r| shape(9, |t| t.powi(r + 1))).collect();
        let m = fpca_fit(&curves).unwrap();
        let k = m.n_components();
        assert_eq!(fpca_reconstruct(&m, &vec![0.0; k], k).unwrap(), m.mean);
        assert!(fpca_reconstruct(&m, &[0.0], k + 1).is_err());
        assert!(fpca_reconstruct(&m, &[], 1).is_err());
    }

    #[test]
    fn perturbation_family() {
        let curves: Vec<Vec<f64>> = (0..5).map(|r| shape(9, |t| (t + r as f64).sin())).collect();
        let m = fpca_fit(&curves).unwrap();
        let fam = perturbation_curves(&m, 0, &DEFAULT_PERTURBATION_MULTIPLIERS).unwrap();
        assert_eq!(fam[2], m.mean);
        for (g, mean) in m.mean.iter().enumerate() {
            let up = fam[3][g] - mean;
            let down = mean - fam[1][g];
            assert!((up - down).abs() < 1e-12);
        }
        assert!(perturbation_curves(&m, 99, &[1.0]).is_err());
    }

    #[test]
    fn orientation_flips_scores_with_component() {
        let curves: Vec<Vec<f64>> = (0..5).map(|r| shape(9, |t| (t + r as f64).sin())).collect();
        let mut m = fpca_fit(&curves).unwrap();
        let before = m.score(0, 0);
        let flipped = m.orient(0, &[0]);
        assert_eq!(flipped, before < 0.0);
        assert!(m.score(0, 0) >= 0.0);
        let again = fpca_project(&m, &curves[0]).unwrap();
        assert!((again[0] - m.score(0, 0)).abs() < 1e-12);
    }

    #[test]
    fn too_few_curves() {
        assert!(fpca_fit(&[vec![1.0, 2.0]]).is_err());
        assert!(fpca_fit(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn rank_deficient_centred_data_reconstructs_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9063);
        for _ in 0..500 {
            let n = rng.random_range(3..12);
            let grid = rng.random_range(3..30);
            let shift: f64 = rng.random_range(-5.0..5.0);
            let curves: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..grid).map(|_| rng.random_range(-5.0..5.0) + shift).collect())
                .collect();
            let m = fpca_fit(&curves).unwrap();
            for (r, c) in curves.iter().enumerate() {
                let rec = fpca_reconstruct(&m, &m.scores[r], m.n_components()).unwrap();
                let err = rec.iter().zip(c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err < 1e-10, "n {n} grid {grid}: error {err:e}");
            }
        }
    }
}

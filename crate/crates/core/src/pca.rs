//! Principal components analysis for projecting signature and phase spaces
//! to low dimension.

use nalgebra::DMatrix;

use crate::collection::PointCloud;
use crate::error::{Error, Result};

/// A fitted PCA basis: centroid, orthonormal components in descending
/// explained variance, and the variances themselves (divisor `n - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    components: Vec<Vec<f64>>,
    explained_variance: Vec<f64>,
}

impl PcaModel {
    /// Fits the top-`k` principal components of `cloud` from the SVD of the
    /// centered data matrix.
    pub fn fit(cloud: &PointCloud, k: usize) -> Result<Self> {
        let m = cloud.len();
        let d = cloud.dim();
        if m < 2 {
            return Err(Error::DegenerateCloud(format!("need at least 2 points, got {m}")));
        }
        if k == 0 || k > m.min(d) {
            return Err(Error::TooManyComponents { k, available: m.min(d) });
        }

        let mut mean = vec![0.0; d];
        for p in cloud.points() {
            for (acc, x) in mean.iter_mut().zip(p) {
                *acc += x;
            }
        }
        for acc in &mut mean {
            *acc /= m as f64;
        }

        let centered = DMatrix::from_fn(m, d, |i, j| cloud.point(i)[j] - mean[j]);
        let svd = centered.svd(false, true);
        let v_t = svd.v_t.expect("v_t requested");

        // descending singular values with stable order on ties
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

        let mut components = Vec::with_capacity(k);
        let mut explained_variance = Vec::with_capacity(k);
        for &idx in order.iter().take(k) {
            let mut comp: Vec<f64> = (0..d).map(|j| v_t[(idx, j)]).collect();
            // sign convention: the entry of largest magnitude is nonnegative
            let lead = comp
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            if comp[lead] < 0.0 {
                for x in &mut comp {
                    *x = -*x;
                }
            }
            components.push(comp);
            let s = svd.singular_values[idx];
            explained_variance.push(s * s / (m as f64 - 1.0));
        }
        Ok(PcaModel { mean, components, explained_variance })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    /// Projects each point onto the component basis after mean subtraction.
    /// Labels carry over.
    pub fn project(&self, cloud: &PointCloud) -> Result<PointCloud> {
        if cloud.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                model_dim: self.dim(),
                cloud_dim: cloud.dim(),
            });
        }
        let points: Vec<Vec<f64>> = cloud
            .points()
            .iter()
            .map(|p| {
                self.components
                    .iter()
                    .map(|c| {
                        p.iter()
                            .zip(c)
                            .zip(&self.mean)
                            .map(|((x, w), mu)| (x - mu) * w)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        match cloud.labels() {
            Some(labels) => PointCloud::with_labels(points, labels.to_vec()),
            None => PointCloud::new(points),
        }
    }

    /// Maps projected coordinates back into the original space.
    pub fn reconstruct(&self, projected: &PointCloud) -> Result<PointCloud> {
        if projected.dim() != self.k() {
            return Err(Error::DimensionMismatch {
                model_dim: self.k(),
                cloud_dim: projected.dim(),
            });
        }
        let points: Vec<Vec<f64>> = projected
            .points()
            .iter()
            .map(|coords| {
                let mut p = self.mean.clone();
                for (w, comp) in coords.iter().zip(&self.components) {
                    for (x, c) in p.iter_mut().zip(comp) {
                        *x += w * c;
                    }
                }
                p
            })
            .collect();
        PointCloud::new(points)
    }
}

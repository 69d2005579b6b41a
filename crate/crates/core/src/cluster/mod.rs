//! K-means on AR parameter vectors and external cluster-quality scores.

mod kmeans;
mod metrics;
mod pipeline;

pub use kmeans::{
    ar_param_points, centroid, cluster_series, inertia_of, kmeans, kmeans_with, KMeansConfig, KMeansResult,
};
pub use metrics::{
    adjusted_mutual_info, adjusted_rand, homogeneity_completeness_v, mutual_info, v_measure,
};
pub use pipeline::{cluster_by_ar_params, fit_points, ClusterScores};

use crate::{Error, Result};

/// Cluster labels, one per item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
}

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidParams("labeling must be non-empty".into()));
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// One more than the largest label.
    pub fn num_clusters(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }
}

impl AsRef<[usize]> for Labeling {
    fn as_ref(&self) -> &[usize] {
        &self.labels
    }
}

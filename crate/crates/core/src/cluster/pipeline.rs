use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use super::{adjusted_mutual_info, adjusted_rand, kmeans, v_measure, KMeansResult};
use crate::arma::FitConfig;
use crate::eig::{estimate_ar_params, Method};
use crate::lds::TimeSeries;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterScores {
    pub ami: f64,
    pub ari: f64,
    pub v_measure: f64,
}

impl ClusterScores {
    pub fn compare(truth: &[usize], pred: &[usize]) -> Result<Self> {
        Ok(Self {
            ami: adjusted_mutual_info(truth, pred)?,
            ari: adjusted_rand(truth, pred)?,
            v_measure: v_measure(truth, pred)?,
        })
    }
}

/// Estimated AR parameters of every series, one row each, fitted in parallel.
pub fn fit_points(series: &[TimeSeries], cfg: &FitConfig, method: Method) -> Result<DMatrix<f64>> {
    let rows = series
        .par_iter()
        .map(|s| estimate_ar_params(s, cfg, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(rows.len(), cfg.order, |i, j| rows[i][j]))
}

/// Fits every series with `method` and runs k-means on the AR parameters.
pub fn cluster_by_ar_params<R: Rng + ?Sized>(
    series: &[TimeSeries],
    k: usize,
    cfg: &FitConfig,
    method: Method,
    rng: &mut R,
) -> Result<KMeansResult> {
    kmeans(&fit_points(series, cfg, method)?, k, rng)
}

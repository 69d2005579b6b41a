use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use super::Labeling;
use crate::arma::ArmaFit;
use crate::seed::child_rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once no center moves farther than this.
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self { restarts: 10, max_iters: 300, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub assignment: Labeling,
    /// One center per row.
    pub centers: DMatrix<f64>,
    pub inertia: f64,
    pub restarts_used: usize,
    /// Lloyd iterations of each restart.
    pub iters_per_restart: Vec<usize>,
    /// Inertia after every assignment step of each restart.
    pub inertia_history: Vec<Vec<f64>>,
}

struct Run {
    assignment: Vec<usize>,
    centers: DMatrix<f64>,
    inertia: f64,
    iters: usize,
    history: Vec<f64>,
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols()).map(|d| (points[(i, d)] - centers[(c, d)]).powi(2)).sum()
}

/// Nearest center per point (lowest index on ties) and the total squared distance.
fn assign(points: &DMatrix<f64>, centers: &DMatrix<f64>) -> (Vec<usize>, Vec<f64>) {
    let mut labels = vec![0; points.nrows()];
    let mut dists = vec![0.0; points.nrows()];
    for i in 0..points.nrows() {
        let mut best = (0, f64::INFINITY);
        for c in 0..centers.nrows() {
            let d = sq_dist(points, i, centers, c);
            if d < best.1 {
                best = (c, d);
            }
        }
        labels[i] = best.0;
        dists[i] = best.1;
    }
    (labels, dists)
}

fn plus_plus<R: Rng + ?Sized>(points: &DMatrix<f64>, k: usize, rng: &mut R) -> DMatrix<f64> {
    let n = points.nrows();
    let mut centers = DMatrix::zeros(k, points.ncols());
    let first = rng.random_range(0..n);
    centers.set_row(0, &points.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centers, 0)).collect();
    for c in 1..k {
        let pick = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // every point already coincides with a center
            Err(_) => rng.random_range(0..n),
        };
        centers.set_row(c, &points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points, i, &centers, c));
        }
    }
    centers
}

fn lloyd<R: Rng + ?Sized>(points: &DMatrix<f64>, k: usize, cfg: &KMeansConfig, rng: &mut R) -> Run {
    let (n, dim) = points.shape();
    let mut centers = plus_plus(points, k, rng);
    let mut history = Vec::new();
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        let (labels, dists) = assign(points, &centers);
        history.push(dists.iter().sum());

        let mut sums = DMatrix::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            let mut row = sums.row_mut(labels[i]);
            row += points.row(i);
        }
        let mut next = centers.clone();
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] > 0 {
                next.set_row(c, &(sums.row(c) / counts[c] as f64));
            } else {
                let far = (0..n)
                    .filter(|&i| !taken[i])
                    .fold(None, |best: Option<usize>, i| match best {
                        Some(b) if dists[b] >= dists[i] => Some(b),
                        _ => Some(i),
                    })
                    .expect("k <= n");
                taken[far] = true;
                next.set_row(c, &points.row(far));
            }
        }
        let shift = (0..k)
            .map(|c| (next.row(c) - centers.row(c)).norm())
            .fold(0.0, f64::max);
        centers = next;
        if shift <= cfg.tol {
            break;
        }
    }
    let (assignment, dists) = assign(points, &centers);
    let inertia = dists.iter().sum();
    history.push(inertia);
    Run { assignment, centers, inertia, iters, history }
}

/// Lloyd's algorithm with k-means++ seeding, best of `cfg.restarts` runs.
/// Restarts run in parallel with seeds derived from one draw of `rng`.
pub fn kmeans_with<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    cfg: &KMeansConfig,
    rng: &mut R,
) -> Result<KMeansResult> {
    if k == 0 || cfg.restarts == 0 || cfg.max_iters == 0 {
        return Err(Error::InvalidParams("clusters, restarts and max_iters must be >= 1".into()));
    }
    if k > points.nrows() {
        return Err(Error::TooManyClusters { clusters: k, points: points.nrows() });
    }
    if let Some(index) = points.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let master: u64 = rng.random();
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| lloyd(points, k, cfg, &mut child_rng(master, r as u64)))
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.inertia < runs[b].inertia { i } else { b });
    let iters_per_restart = runs.iter().map(|r| r.iters).collect();
    let inertia_history = runs.iter().map(|r| r.history.clone()).collect();
    let run = runs.into_iter().nth(best).expect("at least one restart");
    Ok(KMeansResult {
        assignment: Labeling::new(run.assignment)?,
        centers: run.centers,
        inertia: run.inertia,
        restarts_used: cfg.restarts,
        iters_per_restart,
        inertia_history,
    })
}

pub fn kmeans<R: Rng + ?Sized>(points: &DMatrix<f64>, k: usize, rng: &mut R) -> Result<KMeansResult> {
    kmeans_with(points, k, &KMeansConfig::default(), rng)
}

/// Stacks the fitted AR parameter vectors as rows.
pub fn ar_param_points(fits: &[ArmaFit]) -> Result<DMatrix<f64>> {
    let Some(first) = fits.first() else {
        return Err(Error::InvalidParams("no fits to cluster".into()));
    };
    let n = first.order;
    if let Some(f) = fits.iter().find(|f| f.order != n) {
        return Err(Error::OrderMismatch { left: n, right: f.order });
    }
    Ok(DMatrix::from_fn(fits.len(), n, |i, j| fits[i].phi[j]))
}

/// K-means on the fitted AR parameter vectors.
pub fn cluster_series<R: Rng + ?Sized>(fits: &[ArmaFit], k: usize, rng: &mut R) -> Result<KMeansResult> {
    kmeans(&ar_param_points(fits)?, k, rng)
}

/// Squared distances of each point to its assigned center.
pub fn inertia_of(points: &DMatrix<f64>, centers: &DMatrix<f64>, labels: &[usize]) -> f64 {
    labels.iter().enumerate().map(|(i, &c)| sq_dist(points, i, centers, c)).sum()
}

/// Column means.
pub fn centroid(points: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(points.ncols(), |j, _| points.column(j).mean())
}

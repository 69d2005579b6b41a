//! Synthetic clustering benchmark: `K` random stable centers at least
//! [`MIN_CENTER_DISTANCE`] apart in spectrum distance, and member systems
//! whose state-transition matrices are Gaussian perturbations of their
//! center, with the perturbation scale calibrated so that members stay on
//! average within half the smallest inter-center distance.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use super::random::{stable_matrix, standard_gaussian, DEFAULT_MAX_TRIES, DEFAULT_OUTPUT_NOISE};
use super::{random_stable_lds_with, simulate, Inputs, LdsParams, TimeSeries};
use crate::poly::{spectrum_distance, Spectrum};
use crate::seed::child_rng;
use crate::{Error, Result};

pub const MIN_CENTER_DISTANCE: f64 = 0.2;
/// Monte Carlo draws per calibration evaluation.
pub const CALIBRATION_DRAWS: usize = 32;
const BISECTION_STEPS: usize = 40;

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub clusters: usize,
    pub systems: usize,
    pub state_dim: usize,
    pub output_dim: usize,
    pub input_dim: usize,
    pub series_len: usize,
    pub output_noise_std: f64,
    pub max_tries: usize,
}

impl BenchmarkConfig {
    pub fn new(clusters: usize, systems: usize, state_dim: usize, series_len: usize) -> Self {
        Self {
            clusters,
            systems,
            state_dim,
            output_dim: 1,
            input_dim: 1,
            series_len,
            output_noise_std: DEFAULT_OUTPUT_NOISE,
            max_tries: DEFAULT_MAX_TRIES,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticBenchmark {
    pub systems: Vec<LdsParams>,
    pub labels: Vec<usize>,
    pub centers: Vec<LdsParams>,
    pub series: Vec<TimeSeries>,
    /// Master seed the per-system simulations were derived from.
    pub seed: u64,
    /// Calibrated standard deviation of the entrywise perturbation of `A`.
    pub member_std: f64,
}

impl SyntheticBenchmark {
    /// Smallest pairwise spectrum distance between centers.
    pub fn min_center_distance(&self) -> Result<f64> {
        let spectra = spectra_of(&self.centers)?;
        min_pairwise(&spectra)
    }

    /// Mean spectrum distance from each member to its own center.
    pub fn mean_member_distance(&self) -> Result<f64> {
        let centers = spectra_of(&self.centers)?;
        let mut sum = 0.0;
        for (sys, &label) in self.systems.iter().zip(&self.labels) {
            sum += spectrum_distance(&sys.spectrum()?, &centers[label])?;
        }
        Ok(sum / self.systems.len() as f64)
    }
}

fn spectra_of(systems: &[LdsParams]) -> Result<Vec<Spectrum>> {
    systems.iter().map(LdsParams::spectrum).collect()
}

fn min_pairwise(spectra: &[Spectrum]) -> Result<f64> {
    let mut best = f64::INFINITY;
    for i in 0..spectra.len() {
        for j in (i + 1)..spectra.len() {
            best = best.min(spectrum_distance(&spectra[i], &spectra[j])?);
        }
    }
    Ok(best)
}

fn validate(cfg: &BenchmarkConfig) -> Result<()> {
    if cfg.clusters < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 clusters, got {}", cfg.clusters)));
    }
    if cfg.systems < cfg.clusters {
        return Err(Error::TooManyClusters { clusters: cfg.clusters, points: cfg.systems });
    }
    if cfg.state_dim == 0 || cfg.output_dim == 0 || cfg.input_dim == 0 || cfg.series_len == 0 {
        return Err(Error::InvalidParams("dimensions and series length must be >= 1".into()));
    }
    Ok(())
}

fn sample_centers<R: Rng + ?Sized>(cfg: &BenchmarkConfig, rng: &mut R) -> Result<(Vec<LdsParams>, Vec<Spectrum>)> {
    let mut centers: Vec<LdsParams> = Vec::with_capacity(cfg.clusters);
    let mut spectra: Vec<Spectrum> = Vec::with_capacity(cfg.clusters);
    while centers.len() < cfg.clusters {
        let mut accepted = false;
        for _ in 0..cfg.max_tries {
            let c = random_stable_lds_with(cfg.state_dim, cfg.output_dim, cfg.input_dim, cfg.max_tries, rng)?;
            let s = c.spectrum()?;
            let far = spectra
                .iter()
                .map(|o| spectrum_distance(o, &s))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|d| d >= MIN_CENTER_DISTANCE);
            if far {
                centers.push(c);
                spectra.push(s);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::GenerationFailure { what: "separated cluster centers", tries: cfg.max_tries });
        }
    }
    Ok((centers, spectra))
}

fn sample_labels<R: Rng + ?Sized>(cfg: &BenchmarkConfig, rng: &mut R) -> Result<Vec<usize>> {
    for _ in 0..cfg.max_tries {
        let labels: Vec<usize> = (0..cfg.systems).map(|_| rng.random_range(0..cfg.clusters)).collect();
        let mut seen = vec![false; cfg.clusters];
        labels.iter().for_each(|&l| seen[l] = true);
        if seen.iter().all(|&s| s) {
            return Ok(labels);
        }
    }
    Err(Error::GenerationFailure { what: "label assignment covering every cluster", tries: cfg.max_tries })
}

/// Mean member-to-center spectrum distance at perturbation scale `std`,
/// evaluated on a fixed set of Gaussian directions.
fn mc_mean_distance(centers: &[LdsParams], spectra: &[Spectrum], dirs: &[DMatrix<f64>], std: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (i, g) in dirs.iter().enumerate() {
        let c = i % centers.len();
        let a = &centers[c].a + g * std;
        sum += spectrum_distance(&Spectrum::of_matrix(&a)?, &spectra[c])?;
    }
    Ok(sum / dirs.len() as f64)
}

/// Largest perturbation scale whose Monte Carlo mean distance stays below `target`.
fn calibrate_std<R: Rng + ?Sized>(
    centers: &[LdsParams],
    spectra: &[Spectrum],
    target: f64,
    rng: &mut R,
) -> Result<f64> {
    let n = centers[0].state_dim();
    let dirs: Vec<DMatrix<f64>> = (0..CALIBRATION_DRAWS).map(|_| standard_gaussian(n, n, rng)).collect();
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut expand = 0;
    while mc_mean_distance(centers, spectra, &dirs, hi)? < target {
        lo = hi;
        hi *= 2.0;
        expand += 1;
        if expand > 30 {
            return Err(Error::GenerationFailure { what: "perturbation scale calibration", tries: expand });
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mc_mean_distance(centers, spectra, &dirs, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn sample_members<R: Rng + ?Sized>(
    cfg: &BenchmarkConfig,
    centers: &[LdsParams],
    labels: &[usize],
    std: f64,
    rng: &mut R,
) -> Result<Vec<LdsParams>> {
    let n = cfg.state_dim;
    labels
        .iter()
        .map(|&l| {
            let center = &centers[l].a;
            let a = stable_matrix(n, cfg.max_tries, rng, |rng| center + standard_gaussian(n, n, rng) * std)?;
            let b = standard_gaussian(n, cfg.input_dim, rng);
            let c = standard_gaussian(cfg.output_dim, n, rng);
            LdsParams::new(a, b, c, DMatrix::zeros(cfg.output_dim, cfg.input_dim), 0.0, cfg.output_noise_std)
        })
        .collect()
}

pub fn make_benchmark<R: Rng + ?Sized>(cfg: &BenchmarkConfig, rng: &mut R) -> Result<SyntheticBenchmark> {
    validate(cfg)?;
    let (centers, center_spectra) = sample_centers(cfg, rng)?;
    let labels = sample_labels(cfg, rng)?;
    let half_min = 0.5 * min_pairwise(&center_spectra)?;
    let mut std = calibrate_std(&centers, &center_spectra, half_min, rng)?;

    let mut systems = None;
    for _ in 0..cfg.max_tries.min(100) {
        let members = sample_members(cfg, &centers, &labels, std, rng)?;
        let mut sum = 0.0;
        for (sys, &l) in members.iter().zip(&labels) {
            sum += spectrum_distance(&sys.spectrum()?, &center_spectra[l])?;
        }
        if sum / (members.len() as f64) < half_min {
            systems = Some(members);
            break;
        }
        std *= 0.9;
    }
    let systems = systems.ok_or(Error::GenerationFailure { what: "within-cluster spread below half the center gap", tries: 100 })?;

    let seed: u64 = rng.random();
    let series = systems
        .par_iter()
        .enumerate()
        .map(|(i, sys)| {
            let mut r = child_rng(seed, i as u64);
            let s = simulate(sys, Inputs::Gaussian(cfg.series_len), &mut r)?;
            let mut s = s.without_inputs();
            s.id = format!("s{i}");
            Ok(s.with_source("synthetic"))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SyntheticBenchmark { systems, labels, centers, series, seed, member_std: std })
}

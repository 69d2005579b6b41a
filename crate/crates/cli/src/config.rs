use std::path::{Path, PathBuf};

use arma_spectra::arma::ResidualLags;
use arma_spectra::eig::Method;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every tunable of every command. Flags override config-file keys, which
/// override the defaults below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    /// Hidden state dimension, also the fitted AR order.
    pub n: Option<usize>,
    /// Output channels of simulated systems.
    pub m: Option<usize>,
    /// Hidden input dimension of simulated systems.
    pub k: Option<usize>,
    pub len: Option<usize>,
    pub clusters: Option<usize>,
    pub systems: Option<usize>,
    pub alpha: Option<f64>,
    pub noise: Option<f64>,
    pub method: Option<String>,
    pub residual_lags: Option<ResidualLags>,
    pub trials: Option<usize>,
    pub seeds: Option<usize>,
    pub lens: Option<Vec<usize>>,
    pub eps: Option<Vec<f64>>,
    pub study: Option<String>,
    pub series: Option<PathBuf>,
    pub inputs: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub bounds: Option<PathBuf>,
}

pub const MAX_ORDER: usize = 32;
pub const MAX_DIM: usize = 64;
pub const MAX_SYSTEMS: usize = 1_000_000;
pub const STUDIES: [&str; 5] = ["all", "convergence", "perturbation", "correlation", "clustering"];

macro_rules! merge {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        ExperimentConfig { $($f: $hi.$f.or($lo.$f)),* }
    };
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn in_range(name: &str, v: Option<usize>, lo: usize, hi: usize) -> Result<(), CliError> {
    match v {
        Some(x) if x < lo || x > hi => Err(usage(format!("{name} must be in {lo}..={hi}, got {x}"))),
        _ => Ok(()),
    }
}

fn nonneg(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(x) if !(x.is_finite() && x >= 0.0) => Err(usage(format!("{name} must be finite and >= 0, got {x}"))),
        _ => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        Self::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Fields of `self` win over those of `lower`.
    pub fn over(self, lower: ExperimentConfig) -> Self {
        merge!(
            self, lower, seed, n, m, k, len, clusters, systems, alpha, noise, method, residual_lags, trials, seeds,
            lens, eps, study, series, inputs, truth, out, out_dir, metrics, bounds
        )
    }

    pub fn validate(&self) -> Result<(), CliError> {
        in_range("n", self.n, 1, MAX_ORDER)?;
        in_range("m", self.m, 1, MAX_DIM)?;
        in_range("k", self.k, 1, MAX_DIM)?;
        in_range("len", self.len, 1, arma_spectra::io::MAX_CELLS)?;
        in_range("clusters", self.clusters, 1, MAX_SYSTEMS)?;
        in_range("systems", self.systems, 1, MAX_SYSTEMS)?;
        in_range("trials", self.trials, 1, MAX_SYSTEMS)?;
        in_range("seeds", self.seeds, 1, MAX_SYSTEMS)?;
        nonneg("alpha", self.alpha)?;
        nonneg("noise", self.noise)?;
        if let Some(m) = &self.method {
            m.parse::<Method>().map_err(|e| usage(e.to_string()))?;
        }
        if let Some(lens) = &self.lens {
            if lens.is_empty() || lens.iter().any(|&l| l == 0 || l > arma_spectra::io::MAX_CELLS) {
                return Err(usage("lens must be a non-empty list of lengths in 1..=16777216"));
            }
        }
        if let Some(eps) = &self.eps {
            if eps.is_empty() || eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                return Err(usage("eps must be a non-empty list of positive numbers"));
            }
        }
        if let Some(s) = &self.study {
            if !STUDIES.contains(&s.as_str()) {
                return Err(usage(format!("unknown study {s:?} (expected one of {})", STUDIES.join(", "))));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(2)
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(1)
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(1)
    }

    pub fn series_len(&self) -> usize {
        self.len.unwrap_or(1000)
    }

    pub fn clusters(&self) -> usize {
        self.clusters.unwrap_or(2)
    }

    pub fn systems(&self) -> usize {
        self.systems.unwrap_or(100)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(arma_spectra::arma::DEFAULT_RIDGE_ALPHA)
    }

    pub fn noise(&self) -> f64 {
        self.noise.unwrap_or(arma_spectra::lds::DEFAULT_OUTPUT_NOISE)
    }

    pub fn method(&self) -> Method {
        self.method.as_deref().map_or(Method::Arma, |m| m.parse().unwrap_or(Method::Arma))
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(50)
    }

    pub fn seeds(&self) -> usize {
        self.seeds.unwrap_or(20)
    }

    pub fn lens(&self) -> Vec<usize> {
        self.lens.clone().unwrap_or_else(|| vec![1_000, 3_000, 10_000, 30_000, 100_000])
    }

    pub fn eps(&self) -> Vec<f64> {
        self.eps.clone().unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    }

    pub fn study(&self) -> &str {
        self.study.as_deref().unwrap_or("all")
    }

    pub fn fit_config(&self) -> arma_spectra::arma::FitConfig {
        let mut cfg = arma_spectra::arma::FitConfig::new(self.n()).with_alpha(self.alpha());
        cfg.residual_lags = self.residual_lags.unwrap_or_default();
        cfg
    }

    /// A path that has no default.
    pub fn path(&self, name: &str, v: &Option<PathBuf>) -> Result<PathBuf, CliError> {
        v.clone().ok_or_else(|| usage(format!("missing required --{}", name.replace('_', "-"))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let flags = ExperimentConfig { n: Some(3), ..Default::default() };
        let file = ExperimentConfig::parse(r#"{"n": 5, "seed": 9}"#).unwrap();
        let cfg = flags.over(file);
        assert_eq!(cfg.n(), 3);
        assert_eq!(cfg.seed(), 9);
        assert_eq!(cfg.series_len(), 1000);
    }

    #[test]
    fn rejects_unknown_and_out_of_range() {
        assert!(ExperimentConfig::parse(r#"{"bogus": 1}"#).is_err());
        assert!(ExperimentConfig::parse(r#"{"n": -1}"#).is_err());
        let bad = ExperimentConfig { n: Some(0), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { alpha: Some(f64::NAN), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { method: Some("mle".into()), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { lens: Some(vec![]), ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn residual_lags_key() {
        let cfg = ExperimentConfig::parse(r#"{"residual_lags": "latest"}"#).unwrap();
        assert_eq!(cfg.fit_config().residual_lags, ResidualLags::Latest);
    }
}

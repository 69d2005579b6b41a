//! End-to-end eigenvalue recovery (fit → AR parameters → characteristic
//! polynomial → roots) and the numerical studies that check its accuracy:
//! convergence in `T`, root movement under coefficient perturbations,
//! first-order sensitivity of companion eigenvalues, and the correlation
//! between AR-parameter and eigenvalue distances.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::arma::{iterated_regression, iterated_regression_armax, ols_ar, ArmaFit, FitConfig};
use crate::lds::{random_stable_lds, simulate, Inputs, TimeSeries};
use crate::poly::{
    ar_params_to_char_poly, companion_matrix, condition_bounds, max_matched_movement, optimal_matching, poly_roots,
    spectrum_distance, vandermonde_inverse, ConditionBounds, MonicPolynomial, Spectrum,
};
use crate::seed::child_rng;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SpectrumEstimate {
    pub spectrum: Spectrum,
    pub phi_hat: Vec<f64>,
    /// `None` when the estimated spectrum is not simple.
    pub cond: Option<ConditionBounds>,
    pub fit: ArmaFit,
}

/// Roots of `z^n − φ_1 z^{n−1} − ⋯ − φ_n` plus condition bounds when simple.
pub fn spectrum_from_ar_params(phi: &[f64]) -> Result<(Spectrum, Option<ConditionBounds>)> {
    let spectrum = poly_roots(&ar_params_to_char_poly(phi)?)?;
    let cond = match condition_bounds(&spectrum) {
        Ok(c) => Some(c),
        Err(Error::DegenerateSpectrum { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok((spectrum, cond))
}

/// True AR parameters of a system with the given spectrum.
pub fn ar_params_of_spectrum(s: &Spectrum) -> Result<Vec<f64>> {
    Ok(MonicPolynomial::from_roots(s.values())?.to_ar_params())
}

/// Iterated regression, switching to the ARMAX variant for multi-channel
/// series or series with inputs.
pub fn fit_arma(series: &TimeSeries, cfg: &FitConfig) -> Result<ArmaFit> {
    if series.channels() == 1 && series.inputs().is_none() {
        iterated_regression(series, cfg)
    } else {
        iterated_regression_armax(series, cfg)
    }
}

/// Fits the series (ARMAX variant for multi-channel series or series with
/// inputs) and maps the AR parameters to a spectrum.
pub fn estimate_spectrum(series: &TimeSeries, cfg: &FitConfig) -> Result<SpectrumEstimate> {
    let fit = fit_arma(series, cfg)?;
    let (spectrum, cond) = spectrum_from_ar_params(&fit.phi)?;
    Ok(SpectrumEstimate { spectrum, phi_hat: fit.phi.clone(), cond, fit })
}

pub fn ar_param_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::OrderMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
}

/// ℓ2 distance between the AR parameter vectors of two fits.
pub fn ar_distance(a: &ArmaFit, b: &ArmaFit) -> Result<f64> {
    ar_param_distance(&a.phi, &b.phi)
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive pairs.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone)]
pub struct CorrelationStudy {
    /// `(spectrum distance, AR-parameter distance)` for every unordered pair.
    pub pairs: Vec<(f64, f64)>,
    pub pearson: f64,
}

/// Systems with i.i.d. uniform real eigenvalues on `[−1, 1]`; compares
/// eigenvalue distance to AR-parameter distance over all pairs.
pub fn correlation_study<R: Rng + ?Sized>(num_systems: usize, n: usize, rng: &mut R) -> Result<CorrelationStudy> {
    let spectra: Vec<Spectrum> = (0..num_systems)
        .map(|_| Spectrum::from_real(&(0..n).map(|_| rng.random_range(-1.0..=1.0)).collect::<Vec<f64>>()))
        .collect();
    let params = spectra.iter().map(ar_params_of_spectrum).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::with_capacity(num_systems * num_systems.saturating_sub(1) / 2);
    for i in 0..num_systems {
        for j in (i + 1)..num_systems {
            pairs.push((spectrum_distance(&spectra[i], &spectra[j])?, ar_param_distance(&params[i], &params[j])?));
        }
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    let pearson = pearson(&x, &y);
    Ok(CorrelationStudy { pairs, pearson })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationRow {
    pub eps: f64,
    /// Largest matched root movement over the sampled directions.
    pub movement: f64,
}

/// Perturbs the characteristic-polynomial coefficients of `spectrum` by
/// `ε·u` for `directions` random unit vectors `u` (shared across all `ε`) and
/// records the largest matched root movement per `ε`.
pub fn perturbation_study<R: Rng + ?Sized>(
    spectrum: &Spectrum,
    eps_list: &[f64],
    directions: usize,
    rng: &mut R,
) -> Result<Vec<PerturbationRow>> {
    let base = MonicPolynomial::from_roots(spectrum.values())?;
    let n = base.degree();
    let dirs: Vec<Vec<f64>> = (0..directions.max(1))
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let reference = poly_roots(&base)?;
    eps_list
        .iter()
        .map(|&eps| {
            let mut movement: f64 = 0.0;
            for u in &dirs {
                let coeffs = base.coeffs().iter().zip(u).map(|(c, d)| c + eps * d).collect();
                let moved = poly_roots(&MonicPolynomial::new(coeffs)?)?;
                movement = movement.max(max_matched_movement(&reference, &moved)?);
            }
            Ok(PerturbationRow { eps, movement })
        })
        .collect()
}

/// Measured first-order sensitivity of each eigenvalue of the companion
/// matrix of a real simple spectrum: the eigenvalue movement divided by `ε`
/// under the unit-norm perturbation `ε·ŵv̂ᵀ` built from that eigenvalue's
/// left and right eigenvectors, which attains the condition number.
///
/// Results are aligned with `spectrum.values()`.
pub fn companion_sensitivity(spectrum: &Spectrum, eps: f64) -> Result<Vec<f64>> {
    if spectrum.values().iter().any(|v| v.im != 0.0) {
        return Err(Error::InvalidParams("sensitivity probe needs a real spectrum".into()));
    }
    let vals: Vec<f64> = spectrum.values().iter().map(|v| v.re).collect();
    let n = vals.len();
    let cm = companion_matrix(&MonicPolynomial::from_roots(spectrum.values())?)?.into_matrix();
    let inv = vandermonde_inverse(spectrum.values())?;
    (0..n)
        .map(|j| {
            let w: Vec<f64> = (0..n).map(|k| vals[j].powi(k as i32)).collect();
            let v: Vec<f64> = (0..n).map(|k| inv[(k, j)].re).collect();
            let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let dir = DMatrix::from_fn(n, n, |r, c| w[r] * v[c] / (wn * vn));
            let moved = Spectrum::of_matrix(&(&cm + dir * eps))?;
            let assign = optimal_matching(spectrum, &moved)?;
            Ok((moved.values()[assign[j]] - spectrum.values()[j]).norm() / eps)
        })
        .collect()
}

/// Which estimator a convergence trial used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Regularized iterated regression (ARMA(n, n)).
    Arma,
    /// Ordinary least squares AR(n).
    Ar,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Arma => "arma",
            Method::Ar => "ar",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arma" => Ok(Method::Arma),
            "ar" => Ok(Method::Ar),
            _ => Err(Error::InvalidParams(format!("unknown method {s:?} (expected arma or ar)"))),
        }
    }
}

/// AR parameters of a series under `method`. The OLS baseline needs a
/// single channel.
pub fn estimate_ar_params(series: &TimeSeries, cfg: &FitConfig, method: Method) -> Result<Vec<f64>> {
    match method {
        Method::Arma => Ok(fit_arma(series, cfg)?.phi),
        Method::Ar => ols_ar(series, cfg.order, cfg.include_intercept),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub len: usize,
    pub trial: usize,
    pub method: Method,
    pub phi_error: f64,
    pub eig_error: f64,
}

/// For each series length and trial, simulates a random stable LDS (the same
/// system for a given trial across lengths), fits it with every method, and
/// records the AR-parameter and spectrum errors.
pub fn convergence_study(
    state_dim: usize,
    lens: &[usize],
    trials: usize,
    methods: &[Method],
    cfg: &FitConfig,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    let jobs: Vec<(usize, usize)> = (0..lens.len()).flat_map(|l| (0..trials).map(move |t| (l, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(li, trial)| {
            let mut sys_rng = child_rng(seed, trial as u64);
            let sys = random_stable_lds(state_dim, 1, 1, &mut sys_rng)?;
            let truth = sys.spectrum()?;
            let phi = ar_params_of_spectrum(&truth)?;
            let mut sim_rng = child_rng(seed ^ 0x5EED, (li * trials + trial) as u64);
            let series = simulate(&sys, Inputs::Gaussian(lens[li]), &mut sim_rng)?.without_inputs();
            methods
                .iter()
                .map(|&method| {
                    let phi_hat = estimate_ar_params(&series, cfg, method)?;
                    let (spec, _) = spectrum_from_ar_params(&phi_hat)?;
                    Ok(ConvergenceRow {
                        len: lens[li],
                        trial,
                        method,
                        phi_error: ar_param_distance(&phi_hat, &phi)?,
                        eig_error: spectrum_distance(&spec, &truth)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Median of `value` per series length for one method, in `lens` order.
pub fn median_by_len(rows: &[ConvergenceRow], lens: &[usize], method: Method, value: fn(&ConvergenceRow) -> f64) -> Vec<f64> {
    lens.iter()
        .map(|&len| {
            let v: Vec<f64> = rows.iter().filter(|r| r.len == len && r.method == method).map(value).collect();
            median(&v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::condition_bounds;
    use crate::seed::rng_from_seed;
    use num_complex::Complex64;

    #[test]
    fn noiseless_first_order() {
        let v: Vec<f64> = (0..80).map(|t| 0.6f64.powi(t)).collect();
        let est = estimate_spectrum(&TimeSeries::univariate("x", &v).unwrap(), &FitConfig::new(1)).unwrap();
        assert!((est.spectrum.values()[0] - Complex64::new(0.6, 0.0)).norm() < 1e-8);
        assert_eq!(est.cond.as_ref().unwrap().lower, vec![1.0]);
    }

    #[test]
    fn injected_double_root_is_degenerate() {
        let (s, cond) = spectrum_from_ar_params(&[1.0, -0.25]).unwrap();
        assert_eq!(s.values(), &[Complex64::new(0.5, 0.0); 2]);
        assert!(cond.is_none());
    }

    #[test]
    fn distances() {
        assert_eq!(ar_param_distance(&[0.9, -0.2], &[0.9, -0.2]).unwrap(), 0.0);
        assert!((ar_param_distance(&[0.9, -0.2], &[0.9, -0.1]).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(ar_param_distance(&[0.1], &[0.1, 0.2]), Err(Error::OrderMismatch { left: 1, right: 2 })));
    }

    #[test]
    fn correlation_one_dimensional() {
        let c = correlation_study(30, 1, &mut rng_from_seed(1)).unwrap();
        assert_eq!(c.pairs.len(), 435);
        for (a, b) in &c.pairs {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((c.pearson - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_perturbation() {
        let s = Spectrum::from_real(&[0.9, 0.5]);
        let rows = perturbation_study(&s, &[0.0], 4, &mut rng_from_seed(0)).unwrap();
        assert_eq!(rows[0].movement, 0.0);
    }

    #[test]
    fn sensitivity_inside_bounds() {
        let s = Spectrum::from_real(&[0.9, 0.2, -0.6]);
        let k = companion_sensitivity(&s, 1e-7).unwrap();
        let b = condition_bounds(&s).unwrap();
        for j in 0..3 {
            assert!(k[j] >= 0.95 * b.lower[j] && k[j] <= 1.05 * b.upper[j], "{j}: {} not in [{}, {}]", k[j], b.lower[j], b.upper[j]);
        }
        let exact = crate::poly::condition_numbers(&s).unwrap();
        for j in 0..3 {
            assert!((k[j] - exact[j]).abs() < 1e-3 * exact[j]);
        }
    }

    #[test]
    fn slope_and_median_helpers() {
        let x = [1.0, 10.0, 100.0];
        let y = [2.0, 20.0, 200.0];
        assert!((log_log_slope(&x, &y) - 1.0).abs() < 1e-12);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}

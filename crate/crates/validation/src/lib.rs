//! End-to-end acceptance checks for `arma-spectra`. Each check runs a full
//! experiment at its stated tolerance and reports a one-line verdict.

use std::time::{Duration, Instant};

use arma_spectra::arma::{iterated_regression, ols_ar, FitConfig};
use arma_spectra::cluster::{adjusted_mutual_info, adjusted_rand, cluster_by_ar_params, v_measure};
use arma_spectra::eig::{
    ar_param_distance, ar_params_of_spectrum, companion_sensitivity, convergence_study, correlation_study,
    fit_arma, log_log_slope, median, median_by_len, perturbation_study, spectrum_from_ar_params, Method,
};
use arma_spectra::io::{read_series, write_series};
use arma_spectra::lds::{
    change_of_basis, make_benchmark, random_stable_lds, simulate, simulate_arma, BenchmarkConfig, Inputs, LdsParams,
    TimeSeries,
};
use arma_spectra::poly::{
    condition_bounds, spectrum_distance, vandermonde, vandermonde_inverse, MonicPolynomial, Spectrum,
};
use arma_spectra::seed::{child_rng, derive_seed, rng_from_seed};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub type CheckResult = Result<Verdict, arma_spectra::Error>;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub criterion: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {}: {} [{}] {} ({:.1}s)",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub struct Check {
    pub criterion: usize,
    pub name: &'static str,
    pub budget: Option<Duration>,
    pub run: fn() -> CheckResult,
}

impl Check {
    /// Runs the check; an error or a blown time budget counts as a failure.
    pub fn execute(&self) -> Outcome {
        let start = Instant::now();
        let res = (self.run)();
        let elapsed = start.elapsed();
        let (mut pass, mut detail) = match res {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(b) = self.budget {
            if elapsed > b {
                pass = false;
                detail.push_str(&format!("; over the {}s budget", b.as_secs()));
            }
        }
        Outcome { criterion: self.criterion, name: self.name, pass, detail, elapsed }
    }
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { criterion: 1, name: "ar recovery on random 2-d systems", budget: Some(Duration::from_secs(120)), run: ar_recovery },
        Check { criterion: 2, name: "convergence rate", budget: Some(Duration::from_secs(600)), run: convergence_rate },
        Check { criterion: 3, name: "ols bias on arma(1,1)", budget: None, run: ols_bias },
        Check { criterion: 4, name: "root splitting rates", budget: None, run: root_splitting },
        Check { criterion: 5, name: "condition number bracket", budget: None, run: condition_bracket },
        Check { criterion: 6, name: "clustering benchmark", budget: Some(Duration::from_secs(900)), run: clustering_benchmark },
        Check { criterion: 7, name: "ar vs eigenvalue distance correlation", budget: None, run: distance_correlation },
        Check { criterion: 8, name: "invariants", budget: None, run: invariants },
    ]
}

fn observability_ratio(sys: &LdsParams) -> f64 {
    let n = sys.a.nrows();
    let m = sys.c.nrows();
    let mut o = DMatrix::zeros(n * m, n);
    let mut block = sys.c.clone();
    for i in 0..n {
        o.view_mut((i * m, 0), (m, n)).copy_from(&block);
        block = &block * &sys.a;
    }
    let sv = o.singular_values();
    sv.min() / sv.max()
}

/// Random observable 2-d systems with simple spectra, `T = 1e5`.
pub fn ar_recovery() -> CheckResult {
    const SYSTEMS: usize = 20;
    const LEN: usize = 100_000;
    let mut rng = rng_from_seed(1);
    let mut systems = Vec::new();
    while systems.len() < SYSTEMS {
        let sys = random_stable_lds(2, 1, 1, &mut rng)?;
        let simple = sys.spectrum()?.min_gap().is_some_and(|(_, _, g)| g > 1e-6);
        if simple && observability_ratio(&sys) > 1e-8 {
            systems.push(sys);
        }
    }
    let errs = systems
        .par_iter()
        .enumerate()
        .map(|(i, sys)| {
            let truth = sys.spectrum()?;
            let y = simulate(sys, Inputs::Gaussian(LEN), &mut child_rng(2, i as u64))?.without_inputs();
            let phi = iterated_regression(&y, &FitConfig::new(2))?.phi;
            let (est, _) = spectrum_from_ar_params(&phi)?;
            Ok((ar_param_distance(&phi, &ar_params_of_spectrum(&truth)?)?, spectrum_distance(&est, &truth)?))
        })
        .collect::<Result<Vec<_>, arma_spectra::Error>>()?;
    let phi_ok = errs.iter().filter(|e| e.0 <= 0.05).count();
    let both_ok = errs.iter().filter(|e| e.0 <= 0.05 && e.1 <= 0.05).count();
    let med = median(&errs.iter().map(|e| e.0).collect::<Vec<_>>());
    Ok(Verdict::new(
        both_ok >= 18,
        format!("{both_ok}/{SYSTEMS} within 0.05 in both phi and spectrum ({phi_ok} in phi), median phi error {med:.4}, need 18"),
    ))
}

pub const CONVERGENCE_LENS: [usize; 5] = [1_000, 3_000, 10_000, 30_000, 100_000];

pub fn convergence_rate() -> CheckResult {
    let rows = convergence_study(2, &CONVERGENCE_LENS, 50, &[Method::Arma], &FitConfig::new(2), 0)?;
    let med = median_by_len(&rows, &CONVERGENCE_LENS, Method::Arma, |r| r.phi_error);
    let x: Vec<f64> = CONVERGENCE_LENS.iter().map(|&l| l as f64).collect();
    let slope = log_log_slope(&x, &med);
    let meds: Vec<String> = med.iter().map(|m| format!("{m:.4}")).collect();
    Ok(Verdict::new(
        (-0.65..=-0.35).contains(&slope),
        format!("slope {slope:.3} in [-0.65, -0.35], medians [{}]", meds.join(", ")),
    ))
}

/// Lag-one autocorrelation of a stationary ARMA(1,1), the OLS AR(1) limit.
pub fn arma11_lag_one_autocorrelation(phi: f64, theta: f64) -> f64 {
    (1.0 + phi * theta) * (phi + theta) / (1.0 + 2.0 * phi * theta + theta * theta)
}

pub fn ols_bias() -> CheckResult {
    let (phi, theta) = (0.5, 0.9);
    let oracle = arma11_lag_one_autocorrelation(phi, theta);
    let est = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let y = simulate_arma(&[phi], &[theta], 0.0, 1.0, 100_000, 1000, &mut child_rng(3, i))?;
            Ok((ols_ar(&y, 1, true)?[0], iterated_regression(&y, &FitConfig::new(1))?.phi[0]))
        })
        .collect::<Result<Vec<_>, arma_spectra::Error>>()?;
    let ols = median(&est.iter().map(|e| e.0).collect::<Vec<_>>());
    let it = median(&est.iter().map(|e| e.1).collect::<Vec<_>>());
    let pass = (oracle - 0.749).abs() <= 0.03 && (ols - oracle).abs() <= 0.03 && (it - phi).abs() <= 0.03;
    Ok(Verdict::new(pass, format!("ols {ols:.4} vs oracle {oracle:.4}, iterated {it:.4} vs 0.5")))
}

pub const PERTURBATION_EPS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

pub fn root_splitting() -> CheckResult {
    let slope = |s: Spectrum, seed: u64| -> Result<f64, arma_spectra::Error> {
        let rows = perturbation_study(&s, &PERTURBATION_EPS, 20, &mut rng_from_seed(seed))?;
        let mv: Vec<f64> = rows.iter().map(|r| r.movement).collect();
        Ok(log_log_slope(&PERTURBATION_EPS, &mv))
    };
    let simple = slope(Spectrum::from_real(&[0.9, -0.5]), 4)?;
    let double = slope(Spectrum::from_real(&[0.5, 0.5]), 5)?;
    Ok(Verdict::new(
        (simple - 1.0).abs() <= 0.1 && (double - 0.5).abs() <= 0.05,
        format!("simple {simple:.4} (1 +/- 0.1), double {double:.4} (0.5 +/- 0.05)"),
    ))
}

/// Real spectra on `[-1, 1]` with gaps of at least `0.05`.
fn random_simple_spectrum(n: usize, rng: &mut impl Rng) -> Spectrum {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let s = Spectrum::from_real(&v);
        if s.min_gap().is_some_and(|(_, _, g)| g >= 0.05) {
            return s;
        }
    }
}

pub fn condition_bracket() -> CheckResult {
    let mut rng = rng_from_seed(6);
    let mut inside = 0;
    for i in 0..100 {
        let s = random_simple_spectrum(2 + i % 3, &mut rng);
        let cb = condition_bounds(&s)?;
        let sens = companion_sensitivity(&s, 1e-7)?;
        let ok = sens.iter().zip(cb.lower.iter().zip(&cb.upper)).all(|(&k, (&lo, &hi))| k >= 0.95 * lo && k <= 1.05 * hi);
        inside += usize::from(ok);
    }
    Ok(Verdict::new(inside >= 95, format!("{inside}/100 inside [0.95 lower, 1.05 upper], need 95")))
}

/// Mean AMI per method over `seeds` benchmark draws.
pub fn clustering_ami(seeds: usize) -> Result<(f64, f64), arma_spectra::Error> {
    let bc = BenchmarkConfig::new(2, 100, 2, 1000);
    let fc = FitConfig::new(2);
    let (mut arma, mut ar) = (0.0, 0.0);
    for s in 0..seeds as u64 {
        let seed = derive_seed(0, s);
        let bench = make_benchmark(&bc, &mut rng_from_seed(seed))?;
        for (m, acc) in [(Method::Arma, &mut arma), (Method::Ar, &mut ar)] {
            let res = cluster_by_ar_params(&bench.series, 2, &fc, m, &mut child_rng(seed, 1))?;
            *acc += adjusted_mutual_info(&bench.labels, res.assignment.labels())?;
        }
    }
    Ok((arma / seeds as f64, ar / seeds as f64))
}

pub fn clustering_benchmark() -> CheckResult {
    let (arma, ar) = clustering_ami(20)?;
    Ok(Verdict::new(
        (0.05..=0.25).contains(&arma) && arma >= ar,
        format!("mean AMI arma {arma:.4} in [0.05, 0.25], ar {ar:.4}"),
    ))
}

pub fn distance_correlation() -> CheckResult {
    let r = correlation_study(100, 2, &mut rng_from_seed(7))?.pearson;
    Ok(Verdict::new(r >= 0.8, format!("pearson {r:.4} >= 0.8")))
}

fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Deterministic re-checks of the invariants each module promises.
pub fn invariants() -> CheckResult {
    let mut failed: Vec<&str> = Vec::new();
    let mut rng = rng_from_seed(8);

    let mut metric = true;
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let s: Vec<Spectrum> = (0..3).map(|_| Spectrum::new((0..n).map(|_| random_complex(&mut rng)).collect())).collect();
        let d = |a: &Spectrum, b: &Spectrum| spectrum_distance(a, b);
        metric &= d(&s[0], &s[0])? == 0.0;
        metric &= (d(&s[0], &s[1])? - d(&s[1], &s[0])?).abs() < 1e-12;
        metric &= d(&s[0], &s[2])? <= d(&s[0], &s[1])? + d(&s[1], &s[2])? + 1e-12;
    }
    if !metric {
        failed.push("spectrum distance axioms");
    }

    let mut vander = true;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let nodes: Vec<Complex64> = (0..n).map(|_| random_complex(&mut rng)).collect();
        if Spectrum::new(nodes.clone()).min_gap().is_some_and(|(_, _, g)| g < 0.1) {
            continue;
        }
        let prod = vandermonde(&nodes) * vandermonde_inverse(&nodes)?;
        let err = (prod - DMatrix::<Complex64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        vander &= err < 1e-8;
    }
    if !vander {
        failed.push("vandermonde inverse");
    }

    let mut roundtrip = true;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let s = Spectrum::from_real(&(0..n).map(|_| rng.random_range(-1.0..=1.0)).collect::<Vec<_>>());
        let phi = ar_params_of_spectrum(&s)?;
        let (back, _) = spectrum_from_ar_params(&phi)?;
        roundtrip &= ar_param_distance(&ar_params_of_spectrum(&back)?, &phi)? < 1e-8;
    }
    let mut y = simulate_arma(&[0.4, -0.2], &[0.3], 0.0, 1.0, 200, 20, &mut rng)?;
    y.id = "y".into();
    let mut buf = Vec::new();
    write_series(&mut buf, std::slice::from_ref(&y))?;
    roundtrip &= read_series(buf.as_slice())?[0].outputs() == y.outputs();
    if !roundtrip {
        failed.push("round trips");
    }

    let exact = FitConfig::new(2).with_alpha(0.0);
    let y = simulate_arma(&[0.6, -0.3], &[0.4, 0.2], 0.0, 1.0, 5000, 100, &mut rng)?;
    let z = TimeSeries::new("z", y.outputs().map(|v| -3.5 * v + 42.0), None)?;
    if ar_param_distance(&iterated_regression(&y, &exact)?.phi, &iterated_regression(&z, &exact)?.phi)? > 1e-6 {
        failed.push("scale and offset invariance");
    }

    let sys = random_stable_lds(2, 2, 1, &mut rng)?;
    let other = change_of_basis(&sys, &gaussian(2, 2, &mut rng))?;
    let a = fit_arma(&simulate(&sys, Inputs::Gaussian(20_000), &mut rng_from_seed(9))?.without_inputs(), &FitConfig::new(2))?;
    let b = fit_arma(&simulate(&other, Inputs::Gaussian(20_000), &mut rng_from_seed(9))?.without_inputs(), &FitConfig::new(2))?;
    if ar_param_distance(&a.phi, &b.phi)? > 1e-6 {
        failed.push("change of basis invariance");
    }

    let mut scores = (0.0, 0.0);
    let draws = 200;
    for _ in 0..draws {
        let t: Vec<usize> = (0..100).map(|_| rng.random_range(0..3)).collect();
        let p: Vec<usize> = (0..100).map(|_| rng.random_range(0..3)).collect();
        scores.0 += adjusted_mutual_info(&t, &p)?;
        scores.1 += adjusted_rand(&t, &p)?;
    }
    let same: Vec<usize> = (0..30).map(|i| i % 4).collect();
    let relabeled: Vec<usize> = same.iter().map(|l| 3 - l).collect();
    let perfect = adjusted_mutual_info(&same, &relabeled)? == 1.0
        && adjusted_rand(&same, &relabeled)? == 1.0
        && (v_measure(&same, &relabeled)? - 1.0).abs() < 1e-12;
    if (scores.0 / draws as f64).abs() > 0.01 || (scores.1 / draws as f64).abs() > 0.01 || !perfect {
        failed.push("chance correction");
    }

    let bc = BenchmarkConfig::new(2, 12, 2, 300);
    let x = make_benchmark(&bc, &mut rng_from_seed(10))?;
    let y = make_benchmark(&bc, &mut rng_from_seed(10))?;
    let fc = FitConfig::new(2);
    let p = cluster_by_ar_params(&x.series, 2, &fc, Method::Arma, &mut rng_from_seed(11))?;
    let q = cluster_by_ar_params(&y.series, 2, &fc, Method::Arma, &mut rng_from_seed(11))?;
    if x.series != y.series || x.labels != y.labels || p.assignment != q.assignment || p.inertia != q.inertia {
        failed.push("determinism");
    }

    let mono = MonicPolynomial::from_roots(&[Complex64::new(0.5, 0.0)])?;
    if mono.to_ar_params() != vec![0.5] {
        failed.push("ar sign convention");
    }

    Ok(if failed.is_empty() {
        Verdict::new(true, "metric axioms, vandermonde identity, round trips, invariances, chance correction, determinism")
    } else {
        Verdict::new(false, format!("violated: {}", failed.join(", ")))
    })
}

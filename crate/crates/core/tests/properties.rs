use arma_spectra::arma::{iterated_regression, iterated_regression_armax, ExogLags, FitConfig};
use arma_spectra::cluster::{adjusted_mutual_info, cluster_series, kmeans};
use arma_spectra::eig::{
    ar_param_distance, ar_params_of_spectrum, convergence_study, fit_arma, median_by_len, Method,
};
use arma_spectra::lds::{change_of_basis, random_stable_lds, simulate, simulate_arma, Inputs, LdsParams, TimeSeries};
use arma_spectra::poly::{ar_params_to_char_poly, companion_matrix, poly_roots, MonicPolynomial, Spectrum};
use arma_spectra::seed::{child_rng, rng_from_seed};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn affine(s: &TimeSeries, a: f64, b: f64) -> TimeSeries {
    TimeSeries::new("t", s.outputs().map(|v| a * v + b), None).unwrap()
}

/// Conjugate-closed roots of modulus at most `r`.
fn roots_strategy(r: f64) -> impl Strategy<Value = Vec<Complex64>> {
    (1usize..=8).prop_flat_map(move |n| {
        prop::collection::vec((0.0..r, 0.0..std::f64::consts::PI, any::<bool>()), n).prop_map(move |raw| {
            let mut out = Vec::new();
            for (m, a, real) in raw {
                if out.len() == n {
                    break;
                }
                if real || out.len() + 2 > n {
                    out.push(Complex64::new(if a < 1.5 { m } else { -m }, 0.0));
                } else {
                    let z = Complex64::from_polar(m, a);
                    out.push(z);
                    out.push(z.conj());
                }
            }
            out
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ar_params_roundtrip(roots in roots_strategy(1.5)) {
        let phi = MonicPolynomial::from_roots(&roots).unwrap().to_ar_params();
        let found = poly_roots(&ar_char(&phi)).unwrap();
        let back = MonicPolynomial::from_roots(found.values()).unwrap().to_ar_params();
        for (a, b) in phi.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{:?} vs {:?}", phi, back);
        }
    }
}

fn ar_char(phi: &[f64]) -> MonicPolynomial {
    ar_params_to_char_poly(phi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scale_and_offset_leave_phi_unchanged(
        seed in 0u64..1000,
        a in prop_oneof![-20.0..-0.05f64, 0.05..20.0f64],
        b in -100.0..100.0f64,
    ) {
        let y = simulate_arma(&[0.6, -0.3], &[0.4, 0.2], 0.0, 1.0, 2000, 100, &mut rng_from_seed(seed)).unwrap();
        let z = affine(&y, a, b);
        let exact = FitConfig::new(2).with_alpha(0.0);
        let p = iterated_regression(&y, &exact).unwrap().phi;
        let q = iterated_regression(&z, &exact).unwrap().phi;
        prop_assert!(ar_param_distance(&p, &q).unwrap() <= 1e-6, "{:?} vs {:?}", p, q);
        let reg = FitConfig::new(2);
        let p = iterated_regression(&y, &reg).unwrap().phi;
        let q = iterated_regression(&z, &reg).unwrap().phi;
        prop_assert!(ar_param_distance(&p, &q).unwrap() <= 0.01, "{:?} vs {:?}", p, q);
    }
}

#[test]
fn white_noise_leaves_ar_params() {
    let phi = [0.5, -0.3];
    let clean = simulate_arma(&phi, &[0.4], 0.0, 1.0, 100_000, 500, &mut rng_from_seed(3)).unwrap();
    let mut rng = rng_from_seed(4);
    let noisy = TimeSeries::new("n", clean.outputs().map(|v| v + 0.5 * rng.sample::<f64, _>(StandardNormal)), None).unwrap();
    let cfg = FitConfig::new(2);
    let a = iterated_regression(&clean, &cfg).unwrap().phi;
    let b = iterated_regression(&noisy, &cfg).unwrap().phi;
    assert!(ar_param_distance(&a, &b).unwrap() <= 0.05, "{a:?} vs {b:?}");
    assert!(ar_param_distance(&b, &phi).unwrap() <= 0.05, "{b:?}");
}

#[test]
fn change_of_basis_leaves_ar_params() {
    let mut rng = rng_from_seed(8);
    let sys = random_stable_lds(2, 1, 1, &mut rng).unwrap();
    let p = gaussian(2, 2, &mut rng);
    let other = change_of_basis(&sys, &p).unwrap();
    let cfg = FitConfig::new(2);
    let a = iterated_regression(&simulate(&sys, Inputs::Gaussian(100_000), &mut rng_from_seed(1)).unwrap().without_inputs(), &cfg).unwrap();
    let b = iterated_regression(&simulate(&other, Inputs::Gaussian(100_000), &mut rng_from_seed(1)).unwrap().without_inputs(), &cfg).unwrap();
    assert!(ar_param_distance(&a.phi, &b.phi).unwrap() <= 0.05, "{:?} vs {:?}", a.phi, b.phi);
}

#[test]
fn accuracy_improves_and_ols_stalls() {
    let lens = [1_000, 10_000, 100_000];
    let rows = convergence_study(2, &lens, 50, &[Method::Arma, Method::Ar], &FitConfig::new(2), 21).unwrap();
    let arma = median_by_len(&rows, &lens, Method::Arma, |r| r.eig_error);
    let ar = median_by_len(&rows, &lens, Method::Ar, |r| r.eig_error);
    assert!(arma[2] < arma[0], "{arma:?}");
    assert!(ar[2] >= 0.8 * ar[1], "{ar:?}");
}

fn armax_system(d: DMatrix<f64>, rng: &mut impl Rng) -> LdsParams {
    let a = companion_matrix(&MonicPolynomial::from_roots(&[Complex64::new(0.7, 0.0), Complex64::new(-0.4, 0.0)]).unwrap())
        .unwrap()
        .into_matrix();
    LdsParams::new(a, gaussian(2, 1, rng), gaussian(3, 2, rng), d, 0.1, 0.01).unwrap()
}

#[test]
fn armax_with_observed_inputs_and_channels() {
    let mut rng = rng_from_seed(12);
    let sys = armax_system(DMatrix::zeros(3, 1), &mut rng);
    let series = simulate(&sys, Inputs::Gaussian(20_000), &mut rng).unwrap();
    assert!(series.inputs().is_some());
    let fit = iterated_regression_armax(&series, &FitConfig::new(2)).unwrap();
    assert_eq!(fit.per_dim.len(), 3);
    assert_eq!(fit.per_dim[0].gamma.len(), 2);
    let truth = ar_params_of_spectrum(&Spectrum::from_real(&[0.7, -0.4])).unwrap();
    assert!(ar_param_distance(&fit.phi, &truth).unwrap() <= 0.05, "{:?}", fit.phi);
    let mean: Vec<f64> = (0..2).map(|j| fit.per_dim.iter().map(|c| c.phi[j]).sum::<f64>() / 3.0).collect();
    assert!(ar_param_distance(&mean, &fit.phi).unwrap() < 1e-15);
    assert_eq!(fit_arma(&series, &FitConfig::new(2)).unwrap().phi, fit.phi);
}

#[test]
fn feedthrough_needs_the_extra_input_lag() {
    let mut rng = rng_from_seed(12);
    let sys = armax_system(DMatrix::from_element(3, 1, 1.0), &mut rng);
    let series = simulate(&sys, Inputs::Gaussian(20_000), &mut rng).unwrap();
    let truth = ar_params_of_spectrum(&Spectrum::from_real(&[0.7, -0.4])).unwrap();
    let mut cfg = FitConfig::new(2);
    cfg.exog_lags = ExogLags::ThroughOrder;
    let fit = iterated_regression_armax(&series, &cfg).unwrap();
    assert_eq!(fit.per_dim[0].gamma.len(), 3);
    assert!(ar_param_distance(&fit.phi, &truth).unwrap() <= 0.05, "{:?}", fit.phi);
}

/// Members around two well separated real spectra, with fresh random
/// observation and input maps.
#[test]
fn well_separated_benchmark_is_recovered() {
    let centers = [[0.8, 0.5], [-0.7, -0.3]];
    let mut rng = rng_from_seed(5);
    let mut labels = Vec::new();
    let fits: Vec<_> = (0..20u64)
        .map(|i| {
            let label = (i % 2) as usize;
            labels.push(label);
            let vals: Vec<Complex64> =
                centers[label].iter().map(|&v| Complex64::new(v + 0.02 * rng.sample::<f64, _>(StandardNormal), 0.0)).collect();
            let a = companion_matrix(&MonicPolynomial::from_roots(&vals).unwrap()).unwrap().into_matrix();
            let base = LdsParams::new(a, gaussian(2, 2, &mut rng), gaussian(1, 2, &mut rng), DMatrix::zeros(1, 2), 0.0, 0.01).unwrap();
            let sys = change_of_basis(&base, &gaussian(2, 2, &mut rng)).unwrap();
            let y = simulate(&sys, Inputs::Gaussian(100_000), &mut child_rng(9, i)).unwrap().without_inputs();
            iterated_regression(&y, &FitConfig::new(2)).unwrap()
        })
        .collect();
    let res = cluster_series(&fits, 2, &mut rng_from_seed(0)).unwrap();
    let pred = res.assignment.labels();
    let same = labels.iter().zip(pred).filter(|(a, b)| a == b).count();
    let agree = same.max(labels.len() - same);
    assert!(agree >= 18, "{agree}/20");
    assert!(adjusted_mutual_info(&labels, pred).unwrap() >= 0.5);
}

#[test]
fn two_distinct_fits_get_their_own_clusters() {
    let a = iterated_regression(&simulate_arma(&[0.5], &[0.2], 0.0, 1.0, 500, 50, &mut rng_from_seed(1)).unwrap(), &FitConfig::new(1)).unwrap();
    let b = iterated_regression(&simulate_arma(&[-0.5], &[0.2], 0.0, 1.0, 500, 50, &mut rng_from_seed(2)).unwrap(), &FitConfig::new(1)).unwrap();
    let res = cluster_series(&[a.clone(), b], 2, &mut rng_from_seed(0)).unwrap();
    assert_eq!(res.inertia, 0.0);
    assert_ne!(res.assignment.labels()[0], res.assignment.labels()[1]);
    let c = iterated_regression(&simulate_arma(&[0.5, 0.1], &[0.2, 0.0], 0.0, 1.0, 500, 50, &mut rng_from_seed(2)).unwrap(), &FitConfig::new(2)).unwrap();
    assert!(cluster_series(&[a, c], 2, &mut rng_from_seed(0)).is_err());
    assert!(kmeans(&DMatrix::zeros(0, 1), 1, &mut rng_from_seed(0)).is_err());
}

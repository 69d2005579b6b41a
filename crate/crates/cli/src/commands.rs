use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use arma_spectra::cluster::{cluster_by_ar_params, fit_points, kmeans, ClusterScores};
use arma_spectra::eig::{
    convergence_study, correlation_study, estimate_spectrum, log_log_slope, median_by_len, perturbation_study,
    Method,
};
use arma_spectra::io::{self, Cell, ResultTable};
use arma_spectra::lds::{make_benchmark, BenchmarkConfig, TimeSeries};
use arma_spectra::poly::Spectrum;
use arma_spectra::seed::{child_rng, derive_seed, rng_from_seed};
use arma_spectra::Error;

use crate::{CliError, ExperimentConfig};

fn at(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Io { source, .. } => CliError::Io { path: path.to_path_buf(), source },
        e => CliError::core(path.display().to_string(), e),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    let io = |e| CliError::Io { path: path.to_path_buf(), source: e };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    File::create(path).map(BufWriter::new).map_err(io)
}

fn write_with<F>(path: &Path, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> arma_spectra::Result<()>,
{
    let mut w = create(path)?;
    f(&mut w).map_err(at(path))?;
    w.flush().map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn load_series(cfg: &ExperimentConfig) -> Result<Vec<TimeSeries>, CliError> {
    let path = cfg.path("series", &cfg.series)?;
    let series = match &cfg.inputs {
        Some(inp) => io::read_series_with_inputs(open(&path)?, open(inp)?).map_err(at(inp))?,
        None => io::read_series(open(&path)?).map_err(at(&path))?,
    };
    if series.is_empty() {
        return Err(CliError::core(path.display().to_string(), Error::InvalidParams("no series".into())));
    }
    Ok(series)
}

fn series_err(id: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::core(format!("series {id}"), e)
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let dir = cfg.path("out_dir", &cfg.out_dir)?;
    let mut bc = BenchmarkConfig::new(cfg.clusters(), cfg.systems(), cfg.n(), cfg.series_len());
    bc.output_dim = cfg.m();
    bc.input_dim = cfg.k();
    bc.output_noise_std = cfg.noise();
    let bench = make_benchmark(&bc, &mut rng_from_seed(cfg.seed())).map_err(|e| CliError::core("simulate", e))?;

    write_with(&dir.join("series.csv"), |w| io::write_series(w, &bench.series))?;
    let labels: Vec<(String, usize)> = bench.series.iter().zip(&bench.labels).map(|(s, &l)| (s.id.clone(), l)).collect();
    write_with(&dir.join("labels.csv"), |w| io::write_labels(w, &labels))?;
    let spectra = bench
        .series
        .iter()
        .zip(&bench.systems)
        .map(|(s, sys)| Ok((s.id.clone(), sys.spectrum()?)))
        .collect::<arma_spectra::Result<Vec<(String, Spectrum)>>>()
        .map_err(|e| CliError::core("simulate", e))?;
    write_with(&dir.join("spectra.csv"), |w| io::write_spectra(w, &spectra))
}

fn phi_columns(n: usize) -> Vec<String> {
    std::iter::once("series_id".to_string()).chain((1..=n).map(|j| format!("phi_{j}"))).collect()
}

pub fn fit(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let out = cfg.path("out", &cfg.out)?;
    let series = load_series(cfg)?;
    let fc = cfg.fit_config();
    let points = fit_points(&series, &fc, cfg.method()).map_err(|e| CliError::core("fit", e))?;
    let mut table = ResultTable::new(phi_columns(fc.order)).map_err(|e| CliError::core("fit", e))?;
    for (i, s) in series.iter().enumerate() {
        let mut row = vec![Cell::from(s.id.as_str())];
        row.extend(points.row(i).iter().map(|&v| Cell::from(v)));
        table.push(row).map_err(|e| CliError::core("fit", e))?;
    }
    write_with(&out, |w| table.write_csv(w))
}

pub fn eigs(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let out = cfg.path("out", &cfg.out)?;
    let series = load_series(cfg)?;
    let fc = cfg.fit_config();
    let method = cfg.method();
    let estimates = {
        use rayon::prelude::*;
        series
            .par_iter()
            .map(|s| match method {
                Method::Arma => estimate_spectrum(s, &fc).map(|e| (e.spectrum, e.cond)).map_err(series_err(&s.id)),
                Method::Ar => arma_spectra::eig::estimate_ar_params(s, &fc, method)
                    .and_then(|phi| arma_spectra::eig::spectrum_from_ar_params(&phi))
                    .map_err(series_err(&s.id)),
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let spectra: Vec<(String, Spectrum)> =
        series.iter().zip(&estimates).map(|(s, (sp, _))| (s.id.clone(), sp.clone())).collect();
    write_with(&out, |w| io::write_spectra(w, &spectra))?;
    if let Some(path) = &cfg.bounds {
        let mut table = ResultTable::new(["series_id", "index", "re", "im", "cond_lower", "cond_upper"])
            .map_err(|e| CliError::core("eigs", e))?;
        for (s, (sp, cond)) in series.iter().zip(&estimates) {
            for (j, z) in sp.values().iter().enumerate() {
                let (lo, hi) = cond.as_ref().map_or((f64::NAN, f64::NAN), |c| (c.lower[j], c.upper[j]));
                table
                    .push(vec![s.id.as_str().into(), j.into(), z.re.into(), z.im.into(), lo.into(), hi.into()])
                    .map_err(|e| CliError::core("eigs", e))?;
            }
        }
        write_with(path, |w| table.write_csv(w))?;
    }
    Ok(())
}

pub fn cluster(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let out = cfg.path("out", &cfg.out)?;
    let series = load_series(cfg)?;
    let points = fit_points(&series, &cfg.fit_config(), cfg.method()).map_err(|e| CliError::core("cluster", e))?;
    let res = kmeans(&points, cfg.clusters(), &mut rng_from_seed(cfg.seed())).map_err(|e| CliError::core("cluster", e))?;
    let labels: Vec<(String, usize)> =
        series.iter().zip(res.assignment.labels()).map(|(s, &l)| (s.id.clone(), l)).collect();
    write_with(&out, |w| io::write_labels(w, &labels))?;

    let mut metrics = BTreeMap::new();
    metrics.insert("series".to_string(), series.len() as f64);
    metrics.insert("inertia".to_string(), res.inertia);
    if let Some(path) = &cfg.truth {
        let truth: HashMap<String, usize> = io::read_labels(open(path)?).map_err(at(path))?.into_iter().collect();
        let t = series
            .iter()
            .map(|s| {
                truth.get(&s.id).copied().ok_or_else(|| {
                    CliError::core(path.display().to_string(), Error::ShapeError(format!("no label for series {}", s.id)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let scores = ClusterScores::compare(&t, res.assignment.labels()).map_err(|e| CliError::core("cluster", e))?;
        metrics.insert("ami".to_string(), scores.ami);
        metrics.insert("ari".to_string(), scores.ari);
        metrics.insert("v_measure".to_string(), scores.v_measure);
    }
    if let Some(path) = &cfg.metrics {
        write_with(path, |w| io::write_metrics(w, &metrics))?;
    }
    Ok(())
}

/// Evenly spaced real eigenvalues from 0.9 down to −0.5.
fn simple_spectrum(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.9 - 1.4 * i as f64 / (n.max(2) - 1) as f64).collect()
}

pub fn bench(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let dir = cfg.path("out_dir", &cfg.out_dir)?;
    let study = cfg.study();
    let wants = |s: &str| study == "all" || study == s;
    let mut summary = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let err = |e| CliError::core("bench", e);

    if wants("convergence") {
        let start = Instant::now();
        let lens = cfg.lens();
        let methods = [Method::Arma, Method::Ar];
        let rows = convergence_study(cfg.n(), &lens, cfg.trials(), &methods, &cfg.fit_config(), cfg.seed()).map_err(err)?;
        let mut table = ResultTable::new(["len", "trial", "method", "phi_error", "eig_error"]).map_err(err)?;
        for r in &rows {
            table
                .push(vec![r.len.into(), r.trial.into(), r.method.name().into(), r.phi_error.into(), r.eig_error.into()])
                .map_err(err)?;
        }
        write_with(&dir.join("convergence.csv"), |w| table.write_csv(w))?;
        let x: Vec<f64> = lens.iter().map(|&l| l as f64).collect();
        for m in methods {
            let phi = median_by_len(&rows, &lens, m, |r| r.phi_error);
            let eig = median_by_len(&rows, &lens, m, |r| r.eig_error);
            summary.insert(format!("convergence_slope_phi_{}", m.name()), log_log_slope(&x, &phi));
            summary.insert(format!("convergence_slope_eig_{}", m.name()), log_log_slope(&x, &eig));
        }
        timings.insert("convergence_secs".to_string(), start.elapsed().as_secs_f64());
    }

    if wants("perturbation") {
        let start = Instant::now();
        let eps = cfg.eps();
        let n = cfg.n();
        let mut cases = vec![("simple", simple_spectrum(n))];
        if n >= 2 {
            let mut double = vec![0.5, 0.5];
            double.extend(simple_spectrum(n).into_iter().skip(2).map(|v| v - 0.1));
            cases.push(("double", double));
        }
        let mut table = ResultTable::new(["case", "eps", "movement"]).map_err(err)?;
        for (i, (name, vals)) in cases.iter().enumerate() {
            let rows = perturbation_study(&Spectrum::from_real(vals), &eps, 20, &mut child_rng(cfg.seed(), i as u64))
                .map_err(err)?;
            for r in &rows {
                table.push(vec![(*name).into(), r.eps.into(), r.movement.into()]).map_err(err)?;
            }
            let mv: Vec<f64> = rows.iter().map(|r| r.movement).collect();
            summary.insert(format!("perturbation_slope_{name}"), log_log_slope(&eps, &mv));
        }
        write_with(&dir.join("perturbation.csv"), |w| table.write_csv(w))?;
        timings.insert("perturbation_secs".to_string(), start.elapsed().as_secs_f64());
    }

    if wants("correlation") {
        let start = Instant::now();
        let study = correlation_study(cfg.systems(), cfg.n(), &mut rng_from_seed(cfg.seed())).map_err(err)?;
        let mut table = ResultTable::new(["eig_distance", "ar_distance"]).map_err(err)?;
        for &(e, a) in &study.pairs {
            table.push(vec![e.into(), a.into()]).map_err(err)?;
        }
        write_with(&dir.join("correlation.csv"), |w| table.write_csv(w))?;
        summary.insert("correlation_pearson".to_string(), study.pearson);
        timings.insert("correlation_secs".to_string(), start.elapsed().as_secs_f64());
    }

    if wants("clustering") {
        let start = Instant::now();
        let bc = BenchmarkConfig::new(cfg.clusters(), cfg.systems(), cfg.n(), cfg.series_len());
        let fc = cfg.fit_config();
        let mut table = ResultTable::new(["seed", "method", "ami", "ari", "v_measure"]).map_err(err)?;
        let mut sums: BTreeMap<&str, f64> = BTreeMap::new();
        for s in 0..cfg.seeds() {
            let seed = derive_seed(cfg.seed(), s as u64);
            let bench = make_benchmark(&bc, &mut rng_from_seed(seed)).map_err(err)?;
            for m in [Method::Arma, Method::Ar] {
                let res = cluster_by_ar_params(&bench.series, bc.clusters, &fc, m, &mut child_rng(seed, 1)).map_err(err)?;
                let sc = ClusterScores::compare(&bench.labels, res.assignment.labels()).map_err(err)?;
                table.push(vec![s.into(), m.name().into(), sc.ami.into(), sc.ari.into(), sc.v_measure.into()]).map_err(err)?;
                *sums.entry(m.name()).or_default() += sc.ami;
            }
        }
        write_with(&dir.join("clustering.csv"), |w| table.write_csv(w))?;
        for (name, total) in sums {
            summary.insert(format!("clustering_mean_ami_{name}"), total / cfg.seeds() as f64);
        }
        timings.insert("clustering_secs".to_string(), start.elapsed().as_secs_f64());
    }

    write_with(&dir.join("summary.json"), |w| io::write_metrics(w, &summary))?;
    write_with(&dir.join("timings.json"), |w| io::write_metrics(w, &timings))
}

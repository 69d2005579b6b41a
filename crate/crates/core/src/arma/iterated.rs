use nalgebra::DMatrix;

use super::{ridge_ls, FitConfig, ResidualLags};
use crate::lds::{is_missing, TimeSeries, MISSING};
use crate::{Error, Result};

/// Estimates for one output channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFit {
    pub phi: Vec<f64>,
    /// MA coefficients of the last iteration (length `n`).
    pub theta: Vec<f64>,
    pub intercept: f64,
    /// Exogenous coefficients, lag-major: entry `l·k + c` is lag `lags[l]` of input `c`.
    pub gamma: Vec<f64>,
    /// Final-iteration residuals, `MISSING` on rows that were not regressed.
    pub residuals: Vec<f64>,
    pub retained_rows: usize,
    pub solves: usize,
}

/// Result of an iterated-regression fit. For multi-channel series, the top
/// level parameters are averages over channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaFit {
    pub order: usize,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub intercept: f64,
    pub per_dim: Vec<ChannelFit>,
    /// Regression solves per channel.
    pub iterations_run: usize,
}

impl ArmaFit {
    pub fn per_dim_phi(&self) -> Vec<Vec<f64>> {
        self.per_dim.iter().map(|c| c.phi.clone()).collect()
    }

    /// Final residuals of channel `d`.
    pub fn residuals(&self, d: usize) -> &[f64] {
        &self.per_dim[d].residuals
    }

    fn from_channels(order: usize, per_dim: Vec<ChannelFit>) -> Self {
        let m = per_dim.len() as f64;
        let avg = |f: &dyn Fn(&ChannelFit) -> &[f64], len: usize| -> Vec<f64> {
            (0..len).map(|j| per_dim.iter().map(|c| f(c)[j]).sum::<f64>() / m).collect()
        };
        let phi = avg(&|c| &c.phi, order);
        let theta = avg(&|c| &c.theta, order);
        let intercept = per_dim.iter().map(|c| c.intercept).sum::<f64>() / m;
        let iterations_run = per_dim[0].solves;
        Self { order, phi, theta, intercept, per_dim, iterations_run }
    }
}

/// Rows `t ≥ n` whose target and `n` lags are all observed.
fn usable_rows(y: &[f64], n: usize) -> Vec<usize> {
    (n..y.len())
        .filter(|&t| (t - n..=t).all(|s| !is_missing(y[s])))
        .collect()
}

struct Regressors<'a> {
    y: &'a [f64],
    order: usize,
    intercept: bool,
    exog: Option<(&'a DMatrix<f64>, std::ops::Range<usize>)>,
}

impl Regressors<'_> {
    fn exog_cols(&self) -> usize {
        self.exog.as_ref().map_or(0, |(x, lags)| x.ncols() * lags.len())
    }

    fn base_cols(&self) -> usize {
        usize::from(self.intercept) + self.order + self.exog_cols()
    }

    /// Design over `rows` with lagged residual columns appended; column `j`
    /// holds `eps[j][t − j − 1]`.
    fn design(&self, rows: &[usize], eps: &[&[f64]], ma: usize) -> DMatrix<f64> {
        let cols = self.base_cols() + ma;
        let mut d = DMatrix::zeros(rows.len(), cols);
        for (r, &t) in rows.iter().enumerate() {
            let mut c = 0;
            if self.intercept {
                d[(r, c)] = 1.0;
                c += 1;
            }
            for j in 1..=self.order {
                d[(r, c)] = self.y[t - j];
                c += 1;
            }
            if let Some((x, lags)) = &self.exog {
                for lag in lags.clone() {
                    for ch in 0..x.ncols() {
                        d[(r, c)] = x[(t - lag, ch)];
                        c += 1;
                    }
                }
            }
            for j in 1..=ma {
                d[(r, c)] = eps[j - 1][t - j];
                c += 1;
            }
        }
        d
    }
}

fn fit_channel(reg: &Regressors<'_>, cfg: &FitConfig, min_rows: usize) -> Result<ChannelFit> {
    let n = cfg.order;
    let rows = usable_rows(reg.y, n);
    if rows.len() < min_rows {
        return Err(Error::InsufficientData { retained: rows.len(), required: min_rows });
    }
    let targets: Vec<f64> = rows.iter().map(|&t| reg.y[t]).collect();
    let base = reg.base_cols();

    let mut hist: Vec<Vec<f64>> = vec![vec![0.0; reg.y.len()]];
    let mut beta = None;
    let mut solves = 0;
    for ma in 0..=n {
        let cols: Vec<&[f64]> = (1..=ma)
            .map(|j| match cfg.residual_lags {
                ResidualLags::Staggered => hist[ma - j + 1].as_slice(),
                ResidualLags::Latest => hist[ma].as_slice(),
            })
            .collect();
        let design = reg.design(&rows, &cols, ma);
        let mut eps = hist.last().unwrap().clone();
        let mut mask = vec![false; base + ma];
        mask[base..].iter_mut().for_each(|m| *m = true);
        let b = ridge_ls(&design, &targets, &mask, cfg.ridge_alpha)?;
        let fitted = &design * &b;
        for (r, &t) in rows.iter().enumerate() {
            eps[t] = targets[r] - fitted[r];
        }
        hist.push(eps);
        beta = Some(b);
        solves += 1;
    }
    let beta = beta.expect("at least one solve");

    let mut c = 0;
    let intercept = if reg.intercept {
        c = 1;
        beta[0]
    } else {
        0.0
    };
    let phi = beta.rows(c, n).iter().copied().collect();
    c += n;
    let ex = reg.exog_cols();
    let gamma = beta.rows(c, ex).iter().copied().collect();
    c += ex;
    let theta = beta.rows(c, n).iter().copied().collect();

    let mut residuals = vec![MISSING; reg.y.len()];
    for &t in &rows {
        residuals[t] = hist.last().unwrap()[t];
    }
    Ok(ChannelFit { phi, theta, intercept, gamma, residuals, retained_rows: rows.len(), solves })
}

fn single_channel(series: &TimeSeries) -> Result<&[f64]> {
    if series.channels() != 1 {
        return Err(Error::ShapeError(format!(
            "expected a single-channel series, got {} channels",
            series.channels()
        )));
    }
    Ok(series.channel(0))
}

/// Ordinary least squares AR(p): `y_t ≈ c + Σ φ_j y_{t−j}`, unregularized.
pub fn ols_ar(series: &TimeSeries, p: usize, include_intercept: bool) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::InvalidParams("AR order must be >= 1".into()));
    }
    let y = single_channel(series)?;
    let rows = usable_rows(y, p);
    let required = 2 * p + 5;
    if rows.len() < required {
        return Err(Error::InsufficientData { retained: rows.len(), required });
    }
    let reg = Regressors { y, order: p, intercept: include_intercept, exog: None };
    let design = reg.design(&rows, &[], 0);
    let targets: Vec<f64> = rows.iter().map(|&t| y[t]).collect();
    let beta = ridge_ls(&design, &targets, &vec![false; design.ncols()], 0.0)?;
    let c = usize::from(include_intercept);
    Ok(beta.rows(c, p).iter().copied().collect())
}

/// Regularized iterated regression for the AR parameters of an ARMA(n, n)
/// model of a single-channel series.
///
/// Starting from zero residual estimates, regresses `y_t` on an intercept,
/// `n` lags of `y` and `i` lags of the current residual estimates for
/// `i = 0..=n`, with the ℓ2 penalty applied to the residual coefficients
/// only, refreshing the residual estimates after each solve. Which pass
/// feeds each residual lag is set by `cfg.residual_lags`.
pub fn iterated_regression(series: &TimeSeries, cfg: &FitConfig) -> Result<ArmaFit> {
    cfg.validate()?;
    let y = single_channel(series)?;
    let reg = Regressors { y, order: cfg.order, intercept: cfg.include_intercept, exog: None };
    let ch = fit_channel(&reg, cfg, 3 * cfg.order + 10)?;
    Ok(ArmaFit::from_channels(cfg.order, vec![ch]))
}

/// Iterated regression with exogenous inputs, run per output channel; the
/// returned `phi` is the channel average.
pub fn iterated_regression_armax(series: &TimeSeries, cfg: &FitConfig) -> Result<ArmaFit> {
    cfg.validate()?;
    let n = cfg.order;
    let exog = match series.inputs() {
        Some(x) => Some((x, cfg.exog_lags.lags(n))),
        None if cfg.require_inputs => return Err(Error::MissingInputs),
        None => None,
    };
    let min_rows = 3 * n + 10 + exog.as_ref().map_or(0, |(x, lags)| x.ncols() * lags.len());
    let per_dim = (0..series.channels())
        .map(|d| {
            let reg = Regressors { y: series.channel(d), order: n, intercept: cfg.include_intercept, exog: exog.clone() };
            fit_channel(&reg, cfg, min_rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ArmaFit::from_channels(n, per_dim))
}

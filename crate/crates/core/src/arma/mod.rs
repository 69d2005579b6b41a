//! Autoregressive parameter estimation: OLS AR(p), regularized iterated
//! regression for ARMA(n, n), and its ARMAX / multi-channel generalization.

mod config;
mod iterated;
mod ridge;

pub use config::{ExogLags, FitConfig, ResidualLags, DEFAULT_RIDGE_ALPHA};
pub use iterated::{iterated_regression, iterated_regression_armax, ols_ar, ArmaFit, ChannelFit};
pub use ridge::{ridge_ls, RANK_TOL};

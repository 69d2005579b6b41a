use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default ℓ2 penalty on the moving-average coefficients.
pub const DEFAULT_RIDGE_ALPHA: f64 = 0.01;

/// Which lags of the exogenous input enter the ARMAX regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExogLags {
    /// `x_t, …, x_{t−n+1}`: the degree `n−1` input polynomial of the ARMAX
    /// representation, including the contemporaneous term.
    #[default]
    FromZero,
    /// `x_{t−1}, …, x_{t−n+1}`.
    FromOne,
    /// `x_t, …, x_{t−n}`. Needed when the system has a direct feedthrough `D`.
    ThroughOrder,
}

impl ExogLags {
    pub fn lags(self, order: usize) -> std::ops::Range<usize> {
        match self {
            ExogLags::FromZero => 0..order,
            ExogLags::FromOne => 1..order,
            ExogLags::ThroughOrder => 0..order + 1,
        }
    }
}

/// Which earlier pass supplies each lagged residual regressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualLags {
    /// In pass `i`, lag `j` uses the residuals of pass `i − j`.
    #[default]
    Staggered,
    /// Every lag uses the residuals of the previous pass.
    Latest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub order: usize,
    pub ridge_alpha: f64,
    pub include_intercept: bool,
    pub exog_lags: ExogLags,
    pub residual_lags: ResidualLags,
    /// Fail with `MissingInputs` instead of silently fitting without
    /// exogenous terms when the series carries no inputs.
    pub require_inputs: bool,
}

impl FitConfig {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            ridge_alpha: DEFAULT_RIDGE_ALPHA,
            include_intercept: true,
            exog_lags: ExogLags::default(),
            residual_lags: ResidualLags::default(),
            require_inputs: false,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.ridge_alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidParams("AR order must be >= 1".into()));
        }
        if !(self.ridge_alpha.is_finite() && self.ridge_alpha >= 0.0) {
            return Err(Error::InvalidParams(format!("ridge alpha must be finite and >= 0, got {}", self.ridge_alpha)));
        }
        Ok(())
    }
}

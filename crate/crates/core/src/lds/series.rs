use nalgebra::DMatrix;

use crate::{Error, Result};

/// Sentinel for a missing observation.
pub const MISSING: f64 = f64::NAN;

pub fn is_missing(v: f64) -> bool {
    v.is_nan()
}

/// One multi-channel output sequence (`T × m`, NaN marks a missing cell),
/// optionally paired with an observed input sequence (`T × k`).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub id: String,
    pub source: String,
    outputs: DMatrix<f64>,
    inputs: Option<DMatrix<f64>>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, outputs: DMatrix<f64>, inputs: Option<DMatrix<f64>>) -> Result<Self> {
        let (t, m) = outputs.shape();
        if t == 0 || m == 0 {
            return Err(Error::ShapeError(format!("series needs T >= 1 and m >= 1, got {t}x{m}")));
        }
        if let Some(x) = &inputs {
            if x.nrows() != t {
                return Err(Error::ShapeError(format!("inputs have {} rows, outputs {t}", x.nrows())));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParams("inputs must be finite".into()));
            }
        }
        if outputs.iter().any(|v| v.is_infinite()) {
            return Err(Error::InvalidParams("outputs must be finite or missing".into()));
        }
        Ok(Self { id: id.into(), source: String::new(), outputs, inputs })
    }

    /// Single-channel series from a slice.
    pub fn univariate(id: impl Into<String>, values: &[f64]) -> Result<Self> {
        Self::new(id, DMatrix::from_column_slice(values.len(), 1, values), None)
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn len(&self) -> usize {
        self.outputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.nrows() == 0
    }

    pub fn channels(&self) -> usize {
        self.outputs.ncols()
    }

    pub fn outputs(&self) -> &DMatrix<f64> {
        &self.outputs
    }

    pub fn outputs_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.outputs
    }

    pub fn channel(&self, d: usize) -> &[f64] {
        let t = self.len();
        &self.outputs.as_slice()[d * t..(d + 1) * t]
    }

    pub fn inputs(&self) -> Option<&DMatrix<f64>> {
        self.inputs.as_ref()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.as_ref().map_or(0, |x| x.ncols())
    }

    /// Drops the input sequence, e.g. when inputs were hidden drivers.
    pub fn without_inputs(mut self) -> Self {
        self.inputs = None;
        self
    }

    pub fn missing_count(&self) -> usize {
        self.outputs.iter().filter(|v| is_missing(**v)).count()
    }
}

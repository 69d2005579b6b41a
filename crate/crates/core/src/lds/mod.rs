//! Linear dynamical systems: parameters, simulation, random generation and
//! the synthetic clustering benchmark.

mod benchmark;
mod params;
mod random;
mod series;
mod simulate;

pub use benchmark::{make_benchmark, BenchmarkConfig, SyntheticBenchmark, CALIBRATION_DRAWS, MIN_CENTER_DISTANCE};
pub use params::LdsParams;
pub use random::{
    change_of_basis, random_stable_lds, random_stable_lds_with, DEFAULT_MAX_TRIES, DEFAULT_OUTPUT_NOISE,
    MAX_BASIS_CONDITION,
};
pub use series::{is_missing, TimeSeries, MISSING};
pub use simulate::{simulate, simulate_arma, Inputs};

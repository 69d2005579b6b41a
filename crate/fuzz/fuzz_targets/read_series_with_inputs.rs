#![no_main]

use arma_spectra::io::read_series_with_inputs;
use libfuzzer_sys::fuzz_target;

// Outputs and inputs files separated by the first NUL byte.
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|&b| b == 0).unwrap_or(data.len());
    let (outputs, rest) = data.split_at(split);
    let inputs = rest.get(1..).unwrap_or(&[]);
    if let Ok(series) = read_series_with_inputs(outputs, inputs) {
        for s in &series {
            if let Some(x) = s.inputs() {
                assert_eq!(x.nrows(), s.len());
            }
        }
    }
});

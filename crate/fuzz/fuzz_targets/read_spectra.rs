#![no_main]

use arma_spectra::io::read_spectra;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_spectra(data);
});

#![no_main]

use arma_spectra::io::{read_series, write_series};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(series) = read_series(data) else { return };
    let mut out = Vec::new();
    write_series(&mut out, &series).expect("write parsed series");
    let back = read_series(out.as_slice()).expect("reread written series");
    assert_eq!(back.len(), series.len());
    for (a, b) in series.iter().zip(&back) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.outputs().shape(), b.outputs().shape());
    }
});

#![no_main]

use arma_spectra::io::{read_labels, write_labels};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(labels) = read_labels(data) else { return };
    let mut out = Vec::new();
    write_labels(&mut out, &labels).expect("write parsed labels");
    assert_eq!(read_labels(out.as_slice()).expect("reread written labels"), labels);
});

#![no_main]

use arma_spectra::io::ResultTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = ResultTable::read_csv(data) else { return };
    for row in table.rows() {
        assert_eq!(row.len(), table.columns().len());
    }
    let mut out = Vec::new();
    table.write_csv(&mut out).expect("write parsed table");
});

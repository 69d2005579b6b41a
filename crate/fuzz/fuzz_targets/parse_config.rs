#![no_main]

use arma_spectra_cli::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::parse(text) {
        if cfg.validate().is_ok() {
            let _ = cfg.fit_config();
        }
    }
});

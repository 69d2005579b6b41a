use std::process::ExitCode;

use arma_spectra_validation::checks;

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for check in checks() {
        if !filter.is_empty() && !filter.iter().any(|f| *f == check.criterion.to_string()) {
            continue;
        }
        let outcome = check.execute();
        println!("{outcome}");
        failures += usize::from(!outcome.pass);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}

fn main() {
    std::process::exit(arma_spectra_cli::run(std::env::args_os()));
}

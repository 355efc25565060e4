fn main() {
    std::process::exit(oracle_qsl::cli::run(std::env::args_os()));
}

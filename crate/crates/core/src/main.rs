fn main() {
    std::process::exit(fuzzylp::cli::run_cli(std::env::args_os()));
}

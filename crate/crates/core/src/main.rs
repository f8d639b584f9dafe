fn main() {
    std::process::exit(mixfrac::harness::cli::run(std::env::args_os()));
}

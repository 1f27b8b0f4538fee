fn main() {
    std::process::exit(fibpow::cli::run(std::env::args_os()));
}

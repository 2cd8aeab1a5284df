fn main() {
    std::process::exit(fracbvp::cli::run_from_args(std::env::args_os()));
}

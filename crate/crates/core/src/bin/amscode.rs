fn main() {
    std::process::exit(ams_coding::cli::run_from_args(std::env::args_os()));
}

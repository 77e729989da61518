fn main() {
    std::process::exit(nohiding_lab::cli::run_from_args(std::env::args_os()));
}

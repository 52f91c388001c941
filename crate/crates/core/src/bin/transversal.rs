fn main() {
    std::process::exit(transversal::cli::run_cli(std::env::args_os()));
}

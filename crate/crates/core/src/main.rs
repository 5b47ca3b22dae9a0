fn main() {
    std::process::exit(raag_fp::cli::main_with_args(std::env::args_os()));
}

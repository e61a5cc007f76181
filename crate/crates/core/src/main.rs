fn main() {
    std::process::exit(nonexp_fp::cli::main_with_args(std::env::args_os()));
}

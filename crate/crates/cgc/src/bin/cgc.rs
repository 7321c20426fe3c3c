fn main() {
    std::process::exit(cgc::cli::main_with_args(std::env::args_os()));
}

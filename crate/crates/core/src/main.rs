fn main() {
    std::process::exit(deligne::cli::main_with_args(std::env::args_os()));
}

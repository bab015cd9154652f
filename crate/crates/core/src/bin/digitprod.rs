fn main() {
    std::process::exit(digitprod::cli::main_with_args(std::env::args_os()));
}

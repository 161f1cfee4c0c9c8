fn main() {
    std::process::exit(covbracket::cli::main_from_args(std::env::args_os()));
}

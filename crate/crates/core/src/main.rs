fn main() {
    std::process::exit(kmeis::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(massey::cli::main_with_args(std::env::args_os()));
}

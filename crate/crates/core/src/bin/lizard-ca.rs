fn main() {
    std::process::exit(lizard_ca::cli::main_with_args(std::env::args_os()));
}

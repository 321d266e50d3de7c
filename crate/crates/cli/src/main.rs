fn main() {
    std::process::exit(tautring_cli::run(std::env::args_os()));
}

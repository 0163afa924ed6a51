fn main() {
    std::process::exit(magnetogas::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(qmod::cli::run(std::env::args_os()));
}

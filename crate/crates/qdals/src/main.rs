fn main() {
    std::process::exit(qdals::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(tricong::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(railfares::cli::run(std::env::args_os()));
}

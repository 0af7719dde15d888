fn main() {
    std::process::exit(swivel::cli::run(std::env::args_os()));
}

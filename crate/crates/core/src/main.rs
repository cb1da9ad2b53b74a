fn main() {
    std::process::exit(apery::cli::run(std::env::args_os()));
}

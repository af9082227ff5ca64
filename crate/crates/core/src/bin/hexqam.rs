fn main() {
    std::process::exit(hexqam::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(approxvar::cli::run(std::env::args_os()));
}

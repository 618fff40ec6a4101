fn main() {
    std::process::exit(stratolink::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(kcat0::cli::run(std::env::args_os()));
}

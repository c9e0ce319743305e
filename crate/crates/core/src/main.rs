fn main() {
    std::process::exit(sirdiv::cli::run(std::env::args_os()));
}

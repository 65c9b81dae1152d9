fn main() {
    std::process::exit(dyadil::cli::run(std::env::args_os()));
}

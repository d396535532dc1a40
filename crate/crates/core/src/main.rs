fn main() {
    std::process::exit(mrl::cli::run_from(std::env::args_os()));
}

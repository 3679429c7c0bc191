fn main() {
    std::process::exit(levbound::cli::run_from(std::env::args_os()));
}

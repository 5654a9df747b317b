fn main() {
    std::process::exit(wlkaf::cli::parse_and_run(std::env::args_os()));
}

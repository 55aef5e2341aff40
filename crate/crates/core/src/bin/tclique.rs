fn main() {
    std::process::exit(tclique::cli::run(std::env::args_os()));
}

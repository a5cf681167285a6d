fn main() {
    std::process::exit(goodpair_cli::run(std::env::args_os()));
}

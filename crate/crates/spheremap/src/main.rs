fn main() {
    std::process::exit(spheremap::cli::run(std::env::args_os()));
}

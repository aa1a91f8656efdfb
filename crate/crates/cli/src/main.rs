fn main() {
    std::process::exit(topocheck::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(qotto::cli::run(std::env::args_os()));
}

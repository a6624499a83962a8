fn main() {
    std::process::exit(tomo::cli::run());
}

fn main() {
    std::process::exit(entropy_picture::cli::main());
}

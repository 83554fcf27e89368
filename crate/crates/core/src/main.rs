fn main() {
    std::process::exit(smarandache::cli::main());
}

fn main() {
    std::process::exit(hypershift::cli::main());
}

fn main() {
    std::process::exit(bisubmod::cli::main());
}

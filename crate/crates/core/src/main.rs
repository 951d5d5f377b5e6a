fn main() {
    std::process::exit(paiwca::cli::main());
}

fn main() {
    std::process::exit(crosskerr::cli::main());
}

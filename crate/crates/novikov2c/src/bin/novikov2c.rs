fn main() {
    std::process::exit(novikov2c::cli::main());
}

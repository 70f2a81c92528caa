fn main() {
    std::process::exit(driftloc::cli::main_with_args(std::env::args().collect()));
}

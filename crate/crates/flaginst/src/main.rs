fn main() {
    std::process::exit(flaginst::cli::main_with(std::env::args()));
}

fn main() {
    std::process::exit(fscalc::cli::run(std::env::args()));
}

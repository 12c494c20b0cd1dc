fn main() {
    std::process::exit(dvdbinom::cli::run(std::env::args()));
}

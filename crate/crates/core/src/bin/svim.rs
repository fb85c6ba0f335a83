fn main() {
    std::process::exit(signed_voter::cli::run(std::env::args()));
}

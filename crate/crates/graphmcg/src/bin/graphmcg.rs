fn main() {
    std::process::exit(graphmcg::cli::run());
}

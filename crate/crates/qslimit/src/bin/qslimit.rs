fn main() {
    std::process::exit(qslimit::cli::run());
}

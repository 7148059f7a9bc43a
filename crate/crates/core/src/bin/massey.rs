fn main() {
    std::process::exit(massey_core::cli::run());
}

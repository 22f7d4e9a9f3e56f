fn main() {
    std::process::exit(pbk_core::cli::run(std::env::args_os()));
}

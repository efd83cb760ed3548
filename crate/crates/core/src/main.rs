fn main() {
    std::process::exit(optb_core::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(wigner_ho::cli::run_from(std::env::args_os()));
}

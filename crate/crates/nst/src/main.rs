fn main() {
    std::process::exit(nst::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(lg_lab::cli::run(std::env::args_os()));
}

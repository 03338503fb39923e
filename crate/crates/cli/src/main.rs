fn main() {
    std::process::exit(qecvar_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(zetashift_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(holevo::cli::cli_main(std::env::args_os()));
}

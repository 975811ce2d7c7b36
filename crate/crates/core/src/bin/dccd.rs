fn main() {
    std::process::exit(dccd::cli::cli_main(std::env::args_os()));
}

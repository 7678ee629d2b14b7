fn main() {
    std::process::exit(rnla::cli::cli_main(std::env::args_os()))
}

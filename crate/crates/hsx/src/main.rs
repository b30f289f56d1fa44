fn main() {
    std::process::exit(hsx::cli::cli_main(std::env::args()));
}

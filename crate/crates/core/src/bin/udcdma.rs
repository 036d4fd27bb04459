fn main() {
    std::process::exit(ud_cdma::harness::cli_main(std::env::args_os()));
}

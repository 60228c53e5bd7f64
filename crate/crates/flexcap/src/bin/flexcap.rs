fn main() {
    std::process::exit(flexcap::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(sdlab_cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(ngssk::cli::main_with_args(std::env::args_os()));
}

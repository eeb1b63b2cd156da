fn main() {
    std::process::exit(loopcurrent::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(curveflow::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(coorbit_cli::main_with_args(std::env::args_os()));
}

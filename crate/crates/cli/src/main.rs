fn main() {
    std::process::exit(thermoporo_cli::app::main_with(std::env::args_os()));
}

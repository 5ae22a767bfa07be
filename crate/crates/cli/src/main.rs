fn main() {
    std::process::exit(qwplab_cli::run(std::env::args_os()));
}

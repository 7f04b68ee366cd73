fn main() {
    std::process::exit(keypad_layout::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(arr2kirby::cli::main_with(std::env::args_os()));
}

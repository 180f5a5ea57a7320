fn main() {
    std::process::exit(frobstats::cli::main_with_args(std::env::args_os()));
}

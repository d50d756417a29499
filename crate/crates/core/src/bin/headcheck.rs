fn main() {
    std::process::exit(headcheck::cli::main(std::env::args_os()));
}

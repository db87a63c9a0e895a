fn main() {
    std::process::exit(sostiae::cli::main_with_std_io());
}

fn main() {
    std::process::exit(twoval_core::cli::main_entry());
}

fn main() {
    std::process::exit(drw2::cli::main_entry(std::env::args_os()));
}

fn main() { std::process::exit(fourlog::cli::run(std::env::args_os())); }

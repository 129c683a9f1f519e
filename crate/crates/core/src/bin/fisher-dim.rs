fn main() {
    std::process::exit(fisher_dim::cli::main_with(std::env::args_os()));
}

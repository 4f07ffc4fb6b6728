fn main() {
    std::process::exit(bht_lab::cli::run(std::env::args_os().collect()));
}

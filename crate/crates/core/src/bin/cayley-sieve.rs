fn main() {
    std::process::exit(cayley_sieve::cli::run(std::env::args_os()));
}

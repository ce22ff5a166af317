fn main() {
    std::process::exit(hyperbolic_hardy::cli::run(std::env::args_os()));
}

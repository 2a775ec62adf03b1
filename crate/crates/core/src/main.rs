fn main() {
    let code = convexity::cli::run(std::env::args_os());
    std::process::exit(code);
}

fn main() {
    std::process::exit(mavar::cli::run(std::env::args_os()));
}

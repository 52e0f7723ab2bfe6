fn main() {
    std::process::exit(cantorprod::cli::dispatch(std::env::args_os()));
}

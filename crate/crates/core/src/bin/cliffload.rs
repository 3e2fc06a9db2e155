fn main() {
    cliffload::cli::init_threads();
    std::process::exit(cliffload::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(omviz::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(metric_depth::cli::run(std::env::args_os()));
}

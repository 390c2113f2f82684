fn main() {
    std::process::exit(wavefront_cli::run(std::env::args_os()));
}

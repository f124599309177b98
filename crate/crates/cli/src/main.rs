fn main() {
    std::process::exit(vortexel_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(cliquesep_cli::run(std::env::args_os()));
}

use desitter_dirac::cli;

fn main() {
    let code = cli::main_with_args(std::env::args_os(), std::env::var(cli::SEED_ENV).ok());
    std::process::exit(code);
}

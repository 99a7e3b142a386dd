use clap::Parser;

fn main() {
    covering_lab::configure_threads_from_env();
    let cli = covering_lab::cli::Cli::parse();
    match covering_lab::cli::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}

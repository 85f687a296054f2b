use clap::Parser;

fn main() {
    let cli = central_curve_cli::Cli::parse();
    let code = match central_curve_cli::run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    };
    std::process::exit(code);
}

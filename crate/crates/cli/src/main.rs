use clap::Parser;

fn main() {
    let cli = cflow_cli::Cli::parse();
    let code = cflow_cli::execute(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}

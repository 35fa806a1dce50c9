use clap::Parser;

fn main() {
    let cli = lcbif::Cli::parse();
    let code = lcbif::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}

use clap::Parser;

use uavdp_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", cli_out(&cli).join(f).display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn cli_out(cli: &Cli) -> &std::path::Path {
    match &cli.command {
        uavdp_cli::Command::Heatmap(a) => &a.common.out,
        uavdp_cli::Command::Plan(a) => &a.common.out,
        uavdp_cli::Command::Sweep(a) => &a.out,
    }
}

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use lca_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = BufWriter::new(io::stdout().lock());
    let mut err = io::stderr().lock();
    let status = run(cli, &mut input, &mut out, &mut err);
    let flushed = out.flush();
    match (status, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code as u8),
        (Err(e), _) => {
            let _ = writeln!(err, "error: {e:#}");
            ExitCode::from(2)
        }
        (Ok(_), Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(2)
        }
    }
}

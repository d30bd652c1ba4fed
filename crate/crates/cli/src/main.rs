use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = reprokit_cli::run_from_args(std::env::args_os(), &mut io::stdin(), &mut out, &mut io::stderr());
    if out.flush().is_err() && code == 0 {
        std::process::exit(2);
    }
    drop(out);
    std::process::exit(code);
}

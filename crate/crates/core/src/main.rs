use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut code = hilbert3d::cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe && code == 0 {
            eprintln!("error: {e}");
            code = 2;
        }
    }
    ExitCode::from(code as u8)
}

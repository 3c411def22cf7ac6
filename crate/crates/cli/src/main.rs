use std::io::{IsTerminal, Write};

fn main() {
    let color = std::env::var_os(tropmirror_cli::NO_COLOR_ENV).is_none() && std::io::stdout().is_terminal();
    let out = tropmirror_cli::run_with_color(std::env::args_os(), color);
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}

use hqdeform::cli;
use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (code, report) = cli::run_command(&args);
    // tolerate a closed pipe (e.g. piping into head)
    let _ = writeln!(std::io::stdout(), "{report}");
    std::process::exit(code);
}

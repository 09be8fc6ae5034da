use std::io::Write;
use std::process;

fn main() {
    let out = qeta::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    process::exit(out.code);
}

use std::io::Write;

fn main() {
    let out = polystruct::cli::dispatch(std::env::args_os());
    // a closed pipe downstream is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}

use std::io::Write;

fn main() {
    let mut out = Vec::new();
    let code = tasp::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr().lock());
    // A closed pipe downstream is not our failure.
    let _ = std::io::stdout().lock().write_all(&out);
    std::process::exit(code);
}

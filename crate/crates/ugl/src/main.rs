use std::io::Write;

fn main() {
    let o = ugl::cli::run(std::env::args_os());
    std::io::stdout().write_all(o.stdout.as_bytes()).unwrap();
    std::io::stderr().write_all(o.stderr.as_bytes()).unwrap();
    std::process::exit(o.code);
}

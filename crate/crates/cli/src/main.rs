fn main() {
    let (code, text) = monoidlab_cli::run_cli(std::env::args_os());
    if code == monoidlab_cli::EXIT_INPUT {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    std::process::exit(code);
}

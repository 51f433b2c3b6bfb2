fn main() {
    let code = fusionob::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}

fn main() {
    let code = sumset_density::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}

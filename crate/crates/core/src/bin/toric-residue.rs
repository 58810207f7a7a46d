fn main() {
    let outcome = toric_residue::cli::run_from_args(std::env::args_os());
    if outcome.code == 0 {
        print!("{}", outcome.output);
    } else {
        eprint!("{}", outcome.output);
    }
    std::process::exit(outcome.code);
}

use std::process;

fn main() {
    process::exit(lvgames::cli::run(std::env::args()));
}

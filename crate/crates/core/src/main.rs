use std::io::{stderr, stdout};

fn main() {
    let code = ctx_paradox::cli::run(
        std::env::args_os(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    std::process::exit(code);
}

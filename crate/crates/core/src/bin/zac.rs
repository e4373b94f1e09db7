fn main() {
    let code = match std::panic::catch_unwind(|| zac_core::cli::run(std::env::args())) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("zac: internal fault");
            zac_core::cli::EXIT_INTERNAL
        }
    };
    std::process::exit(code);
}

use std::process::ExitCode;

fn main() -> ExitCode {
    owc_dmt::cli::init_logging();
    match owc_dmt::cli::run(std::env::args_os(), &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(e) => {
            eprintln!("owc-dmt: {e}");
            ExitCode::from(2)
        }
    }
}

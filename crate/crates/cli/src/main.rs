use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr();
    match jacobi_cli::run(std::env::args_os(), &mut out, &mut err) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("jacobi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match tgoppa::cli::parse(std::env::args_os()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match tgoppa::cli::execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tgoppa: {e}");
            tgoppa::cli::EXIT_FAILURE
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}

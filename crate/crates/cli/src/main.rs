use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_max_p = std::env::var("EQCOHOM_MAX_P").ok();
    let code = eqcohom_cli::run(
        std::env::args_os(),
        env_max_p.as_deref(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}

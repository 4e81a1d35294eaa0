use std::io::Write;
use std::process::ExitCode;

use prym_atlas::cli::{run, CAPS_ENV};

fn main() -> ExitCode {
    let env_caps = std::env::var(CAPS_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), env_caps.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code.clamp(0, 255) as u8)
}

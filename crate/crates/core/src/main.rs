use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use mumeb::cli::{exit, run, THREADS_ENV};

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .with_context(|| format!("{THREADS_ENV}={value:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")
}

fn main() -> ExitCode {
    if let Err(e) = configure_threads() {
        eprintln!("mumeb: {e:#}");
        return ExitCode::from(exit::USAGE as u8);
    }
    let mut stdout = std::io::stdout().lock();
    let mut code = run(
        std::env::args_os(),
        &mut stdout,
        &mut std::io::stderr().lock(),
    );
    if let Err(e) = stdout.flush() {
        eprintln!("mumeb: flushing standard output: {e}");
        code = exit::IO;
    }
    ExitCode::from(code as u8)
}

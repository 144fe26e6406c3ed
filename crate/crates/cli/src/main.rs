mod commands;
mod options;

use std::process::ExitCode;

use clap::Parser;

use options::Cli;

fn exit_code(err: &anyhow::Error) -> u8 {
    let guard = err
        .chain()
        .filter_map(|e| e.downcast_ref::<ergm_core::Error>())
        .any(|e| e.is_numeric_guard());
    if guard {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = std::env::var("ERGM_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
                log::warn!("could not cap the thread pool: {e}");
            }
        }
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use dirichlet_lattice::Error;

use args::Cli;

/// Errors that stem from the arguments rather than the computation.
fn is_usage(e: &Error) -> bool {
    !matches!(
        e,
        Error::NonFinite(_) | Error::Budget { .. } | Error::Quadrature(_)
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap prints help to stdout (exit 0) and usage errors to stderr (exit 2)
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());

    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            eprintln!("dlat: cannot start {n} workers: {e}");
            return ExitCode::from(1);
        }
    }

    let outcome = match commands::run(&cli.command, cli.timings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("dlat: {e}");
            return ExitCode::from(if is_usage(&e) { 2 } else { 1 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = output::write(&mut out, cli.format, &outcome.records).and_then(|_| out.flush())
    {
        // a closed pipe is not worth a message
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("dlat: {e}");
        }
        return ExitCode::from(1);
    }
    if let Some(note) = outcome.note {
        eprintln!("{note}");
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

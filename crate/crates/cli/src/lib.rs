//! Command-line front end for `lresonance`.

pub mod args;
pub mod cache;
pub mod commands;
pub mod format;

use args::{Cli, Command, ConfigFile, GlobalArgs, Layer};
use clap::Parser;
use commands::{dispatch, CliError, Context};
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

fn layer_command(cmd: Command, cfg: &ConfigFile) -> Command {
    let cfg = cfg.clone();
    match cmd {
        Command::Constants(a) => Command::Constants(a.layer(cfg.constants)),
        Command::Charsum(a) => Command::Charsum(a.layer(cfg.charsum)),
        Command::Lvalue(a) => Command::Lvalue(a.layer(cfg.lvalue)),
        Command::Resonate(a) => Command::Resonate(a.layer(cfg.resonate)),
        Command::Search(a) => Command::Search(a.layer(cfg.search)),
        Command::Proportion(a) => Command::Proportion(a.layer(cfg.proportion)),
    }
}

fn resolve(cli: Cli) -> Result<(GlobalArgs, Command), CliError> {
    let Some(path) = cli.global.config.clone() else {
        return Ok((cli.global, cli.command));
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let cfg = ConfigFile::parse(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let global = cli.global.layer(cfg.global.clone());
    Ok((global, layer_command(cli.command, &cfg)))
}

fn execute(global: GlobalArgs, command: Command) -> Result<u8, CliError> {
    let threads = global.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let name = command.name();
    let mut ctx = Context::new(&global)?;
    let start = Instant::now();
    let outcome = pool.install(|| dispatch(command, &mut ctx));
    for w in ctx.take_warnings() {
        eprintln!("warning: {w}");
    }
    let outcome = outcome?;
    match &global.output {
        Some(path) => std::fs::write(path, &outcome.payload)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.payload.as_bytes())?;
            out.flush()?;
        }
    }
    eprintln!("{name}: {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
    if let Some(msg) = outcome.check_failure {
        eprintln!("check failed: {msg}");
        return Ok(3);
    }
    Ok(0)
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match resolve(cli).and_then(|(g, c)| execute(g, c)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

mod cache;
mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pn_core::linalg::Budget;
use pn_core::Error;

use crate::cache::Cache;
use crate::commands::Command;
use crate::render::{render, Format};

/// Partition complexes, Lie modules, symmetric group homology and genus
/// verdicts for configuration space coverings.
#[derive(Debug, Parser)]
#[command(name = "pn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Result cache directory; PN_CACHE takes precedence when set
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for parallel sections
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    /// Resource limits, e.g. entries=1e8,bits=4096,dense=4e6,seconds=600
    #[arg(long, global = true, value_name = "SPEC")]
    budget: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Resource(_) => 3,
        Error::Invariant(_) => 4,
    }
}

fn configure(cli: &Cli) -> Result<(), Error> {
    if let Some(spec) = &cli.budget {
        let b: Budget = spec.parse()?;
        Budget::set_global(b);
    }
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Error::InvalidInput("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    std::env::var_os("PN_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| cli.cache_dir.clone())
}

fn execute(cli: &Cli) -> Result<String, Error> {
    configure(cli)?;
    let cache = cache_dir(cli).map(|d| Cache::new(&d));
    // the parsed command is a canonical description of the operation
    let key = Cache::key(&format!("{:?}", cli.command));
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(render(&hit, cli.format));
    }
    let value = commands::run(&cli.command)?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &value) {
            eprintln!("pn: warning: could not write cache entry: {e}");
        }
    }
    Ok(render(&value, cli.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pn: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

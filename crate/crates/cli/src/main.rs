use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use binhk_cli::emit::refusal_json;
use binhk_cli::{exit, run, Cache, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT as u8 } else { 0 });
        }
    };
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("binhk: {e}");
            return ExitCode::from(exit::INPUT as u8);
        }
    }
    let cache = match &cli.common.cache_dir {
        Some(dir) => match Cache::at(dir) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("binhk: cache directory {}: {e}", dir.display());
                return ExitCode::from(exit::IO as u8);
            }
        },
        None => Cache::disabled(),
    };
    match run(&cli, &cache) {
        Ok(text) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("binhk: {e}");
                return ExitCode::from(exit::IO as u8);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(r) = &f.refusal {
                print!("{}", refusal_json(r));
            }
            eprintln!("binhk: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

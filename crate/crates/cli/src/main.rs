// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use onc_cli::{execute, CliError, Command, Config};

/// Network-coded offloading simulator for femtocache-assisted cells.
#[derive(Debug, Parser)]
#[command(name = "onc", version)]
struct Args {
    /// What to run.
    #[arg(value_enum)]
    command: Command,

    /// Plain `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override a single config key, e.g. `--set trials=200`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Overrides the `seed` key.
    #[arg(long)]
    seed: Option<u64>,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for trials.
    #[arg(long)]
    threads: Option<usize>,

    /// Leave the timestamp out of the output header.
    #[arg(long)]
    no_timestamp: bool,
}

fn resolve(args: &Args) -> Result<Config, CliError> {
    let mut cfg = Config::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    for kv in &args.sets {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    let cfg = resolve(args)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Other(e.to_string()))?;
    let out = pool.install(|| execute(args.command, &cfg, !args.no_timestamp))?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => std::fs::write(path, &out.text)?,
        None => print!("{}", out.text),
    }
    Ok(!out.failed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! `hyperlab`: runs one experiment from a JSON config and writes its result
//! with a provenance header.

mod config;
mod experiments;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use experiments::{Failure, Output};

const SCHEMA_EXIT: u8 = 2;
const FAILURE_EXIT: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "hyperlab", version, about = "Compact subgroup experiments")]
struct Args {
    /// Experiment config (JSON).
    #[arg(long, required_unless_present = "list_experiments")]
    config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "HYPERLAB_OUT")]
    out: Option<PathBuf>,
    /// Prints the experiment names and exits.
    #[arg(long)]
    list_experiments: bool,
}

#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: &'a str,
    seed: u64,
    config_sha256: String,
}

impl Provenance<'_> {
    fn header_lines(&self) -> Vec<String> {
        vec![
            format!("# tool: {} {}", self.tool, self.version),
            format!("# experiment: {}", self.experiment),
            format!("# seed: {}", self.seed),
            format!("# config_sha256: {}", self.config_sha256),
        ]
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_output(dir: &Path, prov: &Provenance, output: &Output) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    match output {
        Output::Table { columns, rows } => {
            let path = dir.join(format!("{}.csv", prov.experiment));
            let mut file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            for line in prov.header_lines() {
                writeln!(file, "{line}")?;
            }
            let mut w = csv::Writer::from_writer(file);
            w.write_record(columns)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
            Ok(path)
        }
        Output::Structured(result) => {
            let path = dir.join(format!("{}.json", prov.experiment));
            write_json(&path, &json!({ "provenance": prov, "result": result }))?;
            Ok(path)
        }
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn schema_error(err: anyhow::Error) -> ExitCode {
    eprintln!("hyperlab: invalid config: {err:#}");
    ExitCode::from(SCHEMA_EXIT)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_experiments {
        for (name, about) in config::EXPERIMENTS {
            println!("{name:<18}{about}");
        }
        return ExitCode::SUCCESS;
    }
    let path = args.config.expect("required by clap");
    let bytes = match fs::read(&path).with_context(|| format!("reading {}", path.display())) {
        Ok(b) => b,
        Err(e) => return schema_error(e),
    };
    let cfg = match config::parse(&bytes) {
        Ok(c) => c,
        Err(e) => return schema_error(e),
    };
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let dir = args.out.or_else(|| cfg.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("results"));
    let prov = Provenance {
        tool: "hyperlab",
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment.name(),
        seed,
        config_sha256: sha256_hex(&bytes),
    };

    match experiments::run(&cfg.experiment, seed) {
        Ok(output) => match write_output(&dir, &prov, &output) {
            Ok(path) => {
                println!("{}", path.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("hyperlab: {e:#}");
                ExitCode::from(FAILURE_EXIT)
            }
        },
        Err(Failure::Schema(e)) => schema_error(e),
        Err(Failure::Experiment(e)) => {
            eprintln!("hyperlab: experiment failed: {e:#}");
            let record = json!({
                "provenance": prov,
                "error": { "experiment": prov.experiment, "message": format!("{e:#}") },
            });
            let path = dir.join(format!("{}.error.json", prov.experiment));
            if let Err(w) = fs::create_dir_all(&dir).map_err(anyhow::Error::from).and_then(|()| write_json(&path, &record)) {
                eprintln!("hyperlab: could not write error record: {w:#}");
            }
            ExitCode::from(FAILURE_EXIT)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_hex_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

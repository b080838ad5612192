//! Seed and thread resolution: command line over environment over config
//! file over defaults.

use std::path::Path;

use heavytail::{Error, Result};
use serde::Deserialize;

pub const SEED_ENV: &str = "TAYLORLAW_SEED";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    threads: Option<usize>,
}

#[derive(Debug)]
pub struct Context {
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Context {
    /// Announce the seed a randomized command is about to use. Goes to
    /// stderr so piped data output stays clean.
    pub fn echo_seed(&self) {
        eprintln!("seed: {}", self.seed);
    }
}

pub fn resolve(
    cli_seed: Option<u64>,
    config: Option<&Path>,
    cli_threads: Option<usize>,
) -> Result<Context> {
    let file = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| Error::InvalidParameter { name: "config", reason: e.to_string() })?
        }
        None => FileConfig::default(),
    };
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(text) => Some(text.trim().parse::<u64>().map_err(|_| Error::InvalidParameter {
            name: "TAYLORLAW_SEED",
            reason: format!("`{text}` is not an unsigned 64-bit seed"),
        })?),
        Err(_) => None,
    };
    Ok(Context {
        seed: cli_seed.or(env_seed).or(file.seed).unwrap_or(0),
        threads: cli_threads.or(file.threads),
    })
}

//! Settings shared by every subcommand.

use std::path::PathBuf;

use etd_core::Iri;

use crate::CliError;

/// Base used when neither `--base` nor `ETD_BASE_IRI` is given.
pub const DEFAULT_BASE: &str = etd_core::names::DEFAULT_BASE;

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub base: Iri,
    /// Authority recorded on ingested statements; defaults to the base.
    pub authority: Iri,
    pub store_path: Option<PathBuf>,
    pub port: Option<u16>,
}

impl CliConfig {
    pub fn new(base: &str, authority: Option<&str>) -> Result<Self, CliError> {
        let base = parse_iri("--base", base)?;
        let authority = match authority {
            Some(a) => parse_iri("--authority", a)?,
            None => base.clone(),
        };
        Ok(CliConfig {
            base,
            authority,
            store_path: None,
            port: None,
        })
    }
}

fn parse_iri(flag: &str, text: &str) -> Result<Iri, CliError> {
    Iri::parse(text).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

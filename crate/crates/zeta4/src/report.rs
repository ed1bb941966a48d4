//! Newline-delimited JSON report records.

use std::io::Write;

use serde::Serialize;

use crate::{Error, RunConfig, VERSION};

/// One report line. `config` is the fully resolved run configuration.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: &'a RunConfig,
    pub result: T,
    pub warnings: Vec<String>,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(config: &'a RunConfig, result: T) -> Self {
        Report {
            command: config.command.name(),
            version: VERSION,
            config,
            result,
            warnings: Vec::new(),
        }
    }

    pub fn warn(mut self, warning: Option<String>) -> Self {
        self.warnings.extend(warning);
        self
    }
}

/// Writes `record` as a single JSON line.
pub fn write_record<W: Write, T: Serialize>(mut w: W, record: &T) -> Result<(), Error> {
    serde_json::to_writer(&mut w, record)?;
    w.write_all(b"\n")?;
    Ok(())
}

use std::io::Write;

use cayminor::io::{Document, Header};
use serde::Serialize;

use crate::error::{CliError, EXIT_PASS};
use crate::{Cli, Format};

/// Result of a command: the JSON body, an optional table for `--format csv`
/// and the exit code to finish with.
pub struct Report {
    pub header: Header,
    pub body: serde_json::Value,
    pub table: Option<Table>,
    pub code: u8,
    /// Printed to stderr when the code is nonzero.
    pub message: Option<String>,
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(header: Header, body: impl Serialize) -> Result<Self, CliError> {
        let body = serde_json::to_value(body).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Report {
            header,
            body,
            table: None,
            code: EXIT_PASS,
            message: None,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_code(mut self, code: u8, message: impl Into<String>) -> Self {
        self.code = code;
        self.message = Some(message.into());
        self
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let doc = Document::new(self.header.clone(), &self.body);
                let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Usage(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("this command has no CSV form".into()))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.columns)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| CliError::Write(e.into_error()))
            }
        }
    }

    pub fn emit(&self, cli: &Cli) -> Result<u8, CliError> {
        let bytes = self.render(cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, bytes).map_err(CliError::Write)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes).map_err(CliError::Write)?;
                out.flush().map_err(CliError::Write)?;
            }
        }
        if let Some(m) = self.message.as_ref().filter(|_| self.code != 0) {
            eprintln!("{m}");
        }
        Ok(self.code)
    }
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Where command output goes: stdout, or one file per artifact in a
/// directory.
pub struct Sink {
    pub dir: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, name: &str, format: Format, content: &str) -> Result<(), CliError> {
        match &self.dir {
            None => {
                let mut out = std::io::stdout().lock();
                match out
                    .write_all(content.as_bytes())
                    .and_then(|_| if content.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
                {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("stdout", e)),
                    _ => Ok(()),
                }
            }
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
                let path = dir.join(format!("{name}.{}", format.extension()));
                fs::write(&path, content).map_err(|e| CliError::io(&path.display().to_string(), e))?;
                eprintln!("wrote {}", path.display());
                Ok(())
            }
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// CSV text from a header and rows of already formatted fields.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

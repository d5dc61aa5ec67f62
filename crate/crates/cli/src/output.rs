use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Provenance written at the top of every output.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub version: String,
    pub argv: Vec<String>,
    pub seed: u64,
    pub budget: Option<u64>,
}

impl Header {
    pub fn new(argv: Vec<String>, seed: u64, budget: Option<u64>) -> Self {
        Self { version: format!("dtgame {}", env!("CARGO_PKG_VERSION")), argv, seed, budget }
    }

    pub fn comment_lines(&self) -> String {
        let budget = self.budget.map_or_else(|| "none".to_string(), |b| b.to_string());
        format!(
            "# {}\n# argv: {}\n# seed: {}\n# budget: {}\n",
            self.version,
            self.argv.join(" "),
            self.seed,
            budget
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("header serializes")
    }
}

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub header: Header,
}

impl Sink {
    fn writer(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
            None => Box::new(io::stdout().lock()),
        })
    }

    pub fn rows<T: Serialize>(&self, rows: &[T]) -> anyhow::Result<()> {
        let mut w = self.writer()?;
        match self.format {
            Format::Csv => {
                w.write_all(self.header.comment_lines().as_bytes())?;
                let mut csv = csv::Writer::from_writer(w);
                for row in rows {
                    csv.serialize(row)?;
                }
                csv.flush()?;
            }
            Format::Json => {
                let doc = serde_json::json!({ "header": self.header, "rows": rows });
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// Writes raw text preceded by the header as `#` comments.
    pub fn text(&self, body: &str) -> anyhow::Result<()> {
        let mut w = self.writer()?;
        w.write_all(self.header.comment_lines().as_bytes())?;
        w.write_all(body.as_bytes())?;
        Ok(())
    }
}

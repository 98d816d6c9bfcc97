//! Record output in CSV or line-delimited JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Writes records with a fixed column set. Missing cells are `null` in
/// JSON and empty in CSV.
pub struct Table<W: Write> {
    format: Format,
    columns: Vec<&'static str>,
    csv: Option<csv::Writer<W>>,
    json: Option<W>,
    pub rows: u64,
}

impl<W: Write> Table<W> {
    pub fn new(format: Format, columns: &[&'static str], sink: W) -> io::Result<Self> {
        let mut table = Table {
            format,
            columns: columns.to_vec(),
            csv: None,
            json: None,
            rows: 0,
        };
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(sink);
                w.write_record(columns)?;
                table.csv = Some(w);
            }
            Format::Jsonl => table.json = Some(sink),
        }
        Ok(table)
    }

    pub fn row(&mut self, cells: &[(&'static str, Value)]) -> io::Result<()> {
        for (name, _) in cells {
            debug_assert!(self.columns.contains(name), "unknown column {name}");
        }
        let get = |c: &str| cells.iter().find(|(n, _)| *n == c).map(|(_, v)| v);
        self.rows += 1;
        match self.format {
            Format::Csv => {
                let record: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| match get(c) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    })
                    .collect();
                self.csv
                    .as_mut()
                    .expect("csv writer")
                    .write_record(&record)?;
            }
            Format::Jsonl => {
                let mut obj = Map::new();
                for c in &self.columns {
                    obj.insert((*c).to_owned(), get(c).cloned().unwrap_or(Value::Null));
                }
                let w = self.json.as_mut().expect("json writer");
                writeln!(w, "{}", Value::Object(obj))?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> io::Result<()> {
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        if let Some(mut w) = self.json {
            w.flush()?;
        }
        Ok(())
    }
}

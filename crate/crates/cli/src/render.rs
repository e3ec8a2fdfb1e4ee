use std::io::{self, Write};

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Table,
    Json,
    Csv,
}

/// One command result in all three output forms.
#[derive(Debug, Default)]
pub struct Rendered {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Lines printed above the table in table mode only.
    pub notes: Vec<String>,
}

impl Rendered {
    pub fn new(json: Value, header: &[&str]) -> Self {
        Self { json, header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn write(&self, mode: Mode, out: &mut impl Write) -> io::Result<()> {
        match mode {
            Mode::Json => writeln!(out, "{}", serde_json::to_string(&self.json).expect("serializable output")),
            Mode::Csv => {
                writeln!(out, "{}", csv_line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", csv_line(row))?;
                }
                Ok(())
            }
            Mode::Table => {
                for n in &self.notes {
                    writeln!(out, "{n}")?;
                }
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row))?;
                }
                Ok(())
            }
        }
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
        .collect();
    quoted.join(",")
}

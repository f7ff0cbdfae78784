//! CSV text helpers: LF line endings, mandatory header, floats with 17
//! significant digits.

use std::fmt::Display;

/// Formats a float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates rows into a CSV document.
pub struct CsvWriter {
    text: String,
    columns: usize,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[&dyn Display]) {
        debug_assert_eq!(cells.len(), self.columns);
        let line: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

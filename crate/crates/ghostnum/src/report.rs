//! Deterministic output envelopes for the command-line tool.
//!
//! Every command produces a [`Report`]: a schema-versioned envelope holding
//! the echoed command name, a list of result items, and a summary object.
//! The same report renders to JSON (the default), CSV, or a Markdown table.
//!
//! Determinism is part of the contract: items and summaries are stored as
//! [`serde_json::Value`] objects, whose map type keeps keys sorted, so two
//! runs with the same inputs produce byte-identical output in every format.

use serde_json::Value;
use thiserror::Error;

/// Version of the report envelope written by this crate.
pub const SCHEMA_VERSION: &str = "1";

/// Errors from rendering a report.
#[derive(Debug, Error)]
pub enum ReportError {
    /// The CSV writer refused the data (should not happen for the flat
    /// tables this crate emits; surfaced for transparency).
    #[error("CSV rendering failed: {0}")]
    Csv(#[from] csv::Error),
    /// The rendered CSV was not valid UTF-8.
    #[error("CSV rendering produced invalid UTF-8")]
    CsvUtf8,
}

/// Output format of the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

/// A schema-versioned result envelope.
///
/// `items` holds one JSON object per result row; `summary` is a single JSON
/// object of aggregate facts. CSV renders the items as a table (columns are
/// the sorted union of item keys) and omits the summary; Markdown renders
/// both.
#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    items: Vec<Value>,
    summary: Value,
}

impl Report {
    /// An empty report for the given command.
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            items: Vec::new(),
            summary: Value::Object(serde_json::Map::new()),
        }
    }

    /// Appends one result row (a JSON object).
    pub fn push_item(&mut self, item: Value) {
        debug_assert!(item.is_object(), "report items are JSON objects");
        self.items.push(item);
    }

    /// Sets the aggregate summary (a JSON object).
    pub fn set_summary(&mut self, summary: Value) {
        debug_assert!(summary.is_object(), "report summaries are JSON objects");
        self.summary = summary;
    }

    /// The full envelope as a JSON value (keys sorted by construction).
    pub fn envelope(&self) -> Value {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "items": self.items,
            "summary": self.summary,
        })
    }

    /// Renders the report in the requested format.
    pub fn render(&self, format: OutputFormat) -> Result<String, ReportError> {
        match format {
            OutputFormat::Json => Ok(self.to_json()),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => Ok(self.to_markdown()),
        }
    }

    /// Pretty-printed JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.envelope())
            .expect("JSON values always serialize");
        out.push('\n');
        out
    }

    /// The sorted union of the keys of all items.
    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for item in &self.items {
            if let Value::Object(map) = item {
                for key in map.keys() {
                    if !cols.contains(key) {
                        cols.push(key.clone());
                    }
                }
            }
        }
        cols.sort();
        cols
    }

    /// CSV table of the items: header row of sorted column names, one
    /// record per item, nested values rendered as compact JSON.
    pub fn to_csv(&self) -> Result<String, ReportError> {
        let cols = self.columns();
        if cols.is_empty() {
            return Ok("\n".to_string());
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&cols)?;
        for item in &self.items {
            let record: Vec<String> = cols
                .iter()
                .map(|c| item.get(c).map_or_else(String::new, csv_cell))
                .collect();
            writer.write_record(&record)?;
        }
        let bytes = writer.into_inner().map_err(|_| ReportError::CsvUtf8)?;
        String::from_utf8(bytes).map_err(|_| ReportError::CsvUtf8)
    }

    /// Markdown: a title, the item table, and the summary as a bullet list.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("# ghostnum {}\n\n", self.command);
        let cols = self.columns();
        if !cols.is_empty() {
            out.push_str(&format!("| {} |\n", cols.join(" | ")));
            out.push_str(&format!(
                "|{}\n",
                cols.iter().map(|_| " --- |").collect::<String>()
            ));
            for item in &self.items {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| md_escape(&item.get(c).map_or_else(String::new, csv_cell)))
                    .collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
        if let Value::Object(map) = &self.summary {
            if !map.is_empty() {
                out.push_str("## Summary\n\n");
                for (key, value) in map {
                    out.push_str(&format!("- {}: {}\n", key, md_escape(&csv_cell(value))));
                }
            }
        }
        out
    }
}

/// Renders one JSON value as a flat cell: scalars plainly, nested values as
/// compact JSON, null as the empty string.
fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("JSON values always serialize"),
    }
}

/// Escapes a cell for use inside a Markdown table row.
fn md_escape(cell: &str) -> String {
    cell.replace('|', "\\|").replace('\n', " ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut report = Report::new("bounds");
        report.push_item(json!({"label": "Q(8)", "order": 8, "ghost_lower": 3}));
        report.push_item(json!({"label": "D(8)", "order": 8, "window": [3, 4]}));
        report.set_summary(json!({"groups": 2, "all_certified": true}));
        report
    }

    #[test]
    fn json_is_deterministic_and_sorted() {
        let a = sample().to_json();
        let b = sample().to_json();
        assert_eq!(a, b);
        // Keys of the envelope and of each item appear in sorted order.
        let cmd = a.find("\"command\"").unwrap();
        let items = a.find("\"items\"").unwrap();
        let schema = a.find("\"schema_version\"").unwrap();
        let summary = a.find("\"summary\"").unwrap();
        assert!(cmd < items && items < schema && schema < summary);
        let parsed: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["schema_version"], "1");
        assert_eq!(parsed["items"][0]["label"], "Q(8)");
    }

    #[test]
    fn csv_uses_the_sorted_union_of_columns() {
        let csv = sample().to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("ghost_lower,label,order,window"));
        assert_eq!(lines.next(), Some("3,Q(8),8,"));
        // Nested values render as compact JSON (quoted by the CSV writer).
        assert_eq!(lines.next(), Some(",D(8),8,\"[3,4]\""));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn markdown_renders_table_and_summary() {
        let md = sample().to_markdown();
        assert!(md.starts_with("# ghostnum bounds\n"));
        assert!(md.contains("| ghost_lower | label | order | window |"));
        assert!(md.contains("| 3 | Q(8) | 8 |  |"));
        assert!(md.contains("- all_certified: true"));
        assert!(md.contains("- groups: 2"));
    }

    #[test]
    fn markdown_escapes_pipes() {
        let mut report = Report::new("info");
        report.push_item(json!({"note": "a|b"}));
        let md = report.to_markdown();
        assert!(md.contains("a\\|b"));
    }

    #[test]
    fn empty_report_renders_in_every_format() {
        let report = Report::new("verify");
        assert!(report.to_json().contains("\"items\": []"));
        assert_eq!(report.to_csv().unwrap(), "\n");
        assert_eq!(report.to_markdown(), "# ghostnum verify\n\n");
    }
}

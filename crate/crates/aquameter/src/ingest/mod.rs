//! Parsers for the input tables.
//!
//! All formats are header-first CSV. Parsing is strict: every malformed row
//! is collected with its line number and reported in one validation error;
//! nothing is silently dropped or defaulted.

pub mod carbon;
pub mod energy;
pub mod fuel_mix;
pub mod gammas;
pub mod intensity;
pub mod pue;
pub mod region;
pub mod weather;

use std::collections::BTreeMap;
use std::io::Read;

use crate::error::{Error, Issue, ValidationReport};

pub(crate) struct CsvTable {
    pub source: String,
    pub headers: Vec<String>,
    /// (1-based source line, fields) per data row.
    pub rows: Vec<(u64, Vec<String>)>,
}

pub(crate) fn read_table(reader: impl Read, source: &str) -> Result<CsvTable, Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|inner| Error::Csv {
            file: source.into(),
            inner,
        })?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let mut rows = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|inner| Error::Csv {
            file: source.into(),
            inner,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, record.iter().map(String::from).collect()));
    }
    Ok(CsvTable {
        source: source.into(),
        headers,
        rows,
    })
}

/// Column layout check: `required` must all be present, from each group in
/// `choices` exactly one must be present, anything else must come from
/// `optional`.
pub(crate) fn check_columns(
    table: &CsvTable,
    required: &[&str],
    optional: &[&str],
    choices: &[&[&str]],
) -> Result<(), Error> {
    for header in &table.headers {
        let known = required.contains(&header.as_str())
            || optional.contains(&header.as_str())
            || choices.iter().any(|group| group.contains(&header.as_str()));
        if !known {
            return Err(Error::UnknownColumn {
                file: table.source.clone(),
                column: header.clone(),
            });
        }
    }
    for column in required {
        if !table.headers.iter().any(|h| h == column) {
            return Err(Error::MissingColumn {
                file: table.source.clone(),
                column: (*column).into(),
            });
        }
    }
    for group in choices {
        let found: Vec<&str> = group
            .iter()
            .filter(|c| table.headers.iter().any(|h| h == *c))
            .copied()
            .collect();
        if found.len() != 1 {
            return Err(Error::ColumnChoice {
                file: table.source.clone(),
                expected: group.join(", "),
                found: found.join(", "),
            });
        }
    }
    Ok(())
}

pub(crate) struct HeaderIndex {
    map: BTreeMap<String, usize>,
    width: usize,
}

impl HeaderIndex {
    pub(crate) fn new(headers: &[String]) -> Self {
        Self {
            map: headers
                .iter()
                .enumerate()
                .map(|(i, h)| (h.clone(), i))
                .collect(),
            width: headers.len(),
        }
    }

    pub(crate) fn has(&self, column: &str) -> bool {
        self.map.contains_key(column)
    }

    /// The trimmed field under `column`, or `None` when the column is absent
    /// or the field is empty.
    pub(crate) fn get<'a>(&self, fields: &'a [String], column: &str) -> Option<&'a str> {
        let &index = self.map.get(column)?;
        let field = fields.get(index)?.as_str();
        if field.is_empty() {
            None
        } else {
            Some(field)
        }
    }

    /// Rejects rows that carry extra non-empty fields beyond the header
    /// width; extra empty fields (trailing commas) are tolerated.
    pub(crate) fn check_width(&self, fields: &[String]) -> Result<(), String> {
        if fields.len() > self.width && fields[self.width..].iter().any(|f| !f.is_empty()) {
            return Err(format!(
                "row has {} fields but the header declares {}",
                fields.len(),
                self.width
            ));
        }
        if fields.iter().all(String::is_empty) {
            return Err("blank row".into());
        }
        Ok(())
    }
}

pub(crate) fn finish(source: &str, issues: Vec<Issue>) -> Result<(), Error> {
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(ValidationReport {
            source: source.into(),
            issues,
        }))
    }
}

pub(crate) fn parse_f64(field: &str, what: &str) -> Result<f64, String> {
    field
        .parse::<f64>()
        .map_err(|_| format!("unparseable {what}: {field:?}"))
}

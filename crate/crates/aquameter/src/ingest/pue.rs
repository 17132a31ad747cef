//! PUE override CSV: `region,pue`. Entries extend or replace the built-ins.

use std::io::{Read, Write};
use std::path::Path;

use aquameter_core::{builtin_pue_table, PueTable};

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

fn parse_region_key(raw: &str) -> Result<String, String> {
    let trimmed = raw.trim();
    if !trimmed.is_empty() && trimmed.bytes().all(|b| b.is_ascii_alphabetic()) {
        Ok(trimmed.to_ascii_uppercase())
    } else {
        Err(format!("invalid region key: {trimmed:?}"))
    }
}

pub fn parse_pue(reader: impl Read, source: &str) -> Result<Vec<(String, f64)>, Error> {
    let table = read_table(reader, source)?;
    check_columns(&table, &["region", "pue"], &[], &[])?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut entries = Vec::new();
    let mut seen: std::collections::BTreeMap<String, u64> = std::collections::BTreeMap::new();

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }
        let region = index
            .get(fields, "region")
            .ok_or_else(|| "missing region".to_string())
            .and_then(parse_region_key);
        let pue = index
            .get(fields, "pue")
            .ok_or_else(|| "missing pue".to_string())
            .and_then(|raw| parse_f64(raw, "pue"))
            .and_then(|v| {
                if v.is_finite() && v >= 1.0 {
                    Ok(v)
                } else {
                    Err(format!("PUE {v} must be >= 1.0"))
                }
            });
        let (region, pue) = match (region, pue) {
            (Ok(r), Ok(p)) => (r, p),
            (r, p) => {
                for message in [r.err(), p.err()].into_iter().flatten() {
                    push(message);
                }
                continue;
            }
        };
        if let Some(&previous_line) = seen.get(&region) {
            push(format!(
                "duplicate region {region:?} (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(region.clone(), line);
        entries.push((region, pue));
    }

    finish(source, issues)?;
    Ok(entries)
}

/// The effective PUE table: built-ins, with the optional override file
/// applied on top.
pub fn load_pue_table(path: Option<&Path>) -> Result<PueTable, Error> {
    let mut table = builtin_pue_table();
    if let Some(path) = path {
        let source = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
        for (region, pue) in parse_pue(std::io::BufReader::new(file), &source)? {
            table.insert(&region, pue)?;
        }
    }
    Ok(table)
}

pub fn write_pue_csv(table: &PueTable, mut writer: impl Write) -> std::io::Result<()> {
    writeln!(writer, "region,pue")?;
    for (region, pue) in table.iter() {
        writeln!(writer, "{region},{pue}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_wins_over_builtin() {
        let entries = parse_pue("region,pue\nza,1.6\nxx,2.0\n".as_bytes(), "pue.csv").unwrap();
        let mut table = builtin_pue_table();
        for (region, pue) in entries {
            table.insert(&region, pue).unwrap();
        }
        assert_eq!(table.get("ZA"), Some(1.6));
        assert_eq!(table.get("XX"), Some(2.0));
        assert_eq!(table.get("US"), Some(1.17)); // untouched built-in
    }

    #[test]
    fn sub_unity_pue_rejected() {
        assert!(parse_pue("region,pue\nZA,0.9\n".as_bytes(), "pue.csv").is_err());
    }

    #[test]
    fn serialize_roundtrip() {
        let table = builtin_pue_table();
        let mut out = Vec::new();
        write_pue_csv(&table, &mut out).unwrap();
        let entries = parse_pue(out.as_slice(), "roundtrip.csv").unwrap();
        let mut rebuilt = PueTable::new();
        for (region, pue) in entries {
            rebuilt.insert(&region, pue).unwrap();
        }
        assert_eq!(table, rebuilt);
    }
}

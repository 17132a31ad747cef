//! Carbon-intensity CSV: `region,kg_per_kwh`. No built-ins: carbon is a
//! pass-through that only applies when the user supplies grid intensities.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

pub fn parse_carbon(reader: impl Read, source: &str) -> Result<BTreeMap<String, f64>, Error> {
    let table = read_table(reader, source)?;
    check_columns(&table, &["region", "kg_per_kwh"], &[], &[])?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();

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
            .map(|r| r.to_ascii_uppercase());
        let value = index
            .get(fields, "kg_per_kwh")
            .ok_or_else(|| "missing kg_per_kwh".to_string())
            .and_then(|raw| parse_f64(raw, "kg_per_kwh"))
            .and_then(|v| {
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(format!("carbon intensity {v} must be >= 0"))
                }
            });
        let (region, value) = match (region, value) {
            (Ok(r), Ok(v)) => (r, v),
            (r, v) => {
                for message in [r.err(), v.err()].into_iter().flatten() {
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
        map.insert(region, value);
    }

    finish(source, issues)?;
    Ok(map)
}

pub fn parse_carbon_path(path: &Path) -> Result<BTreeMap<String, f64>, Error> {
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    parse_carbon(std::io::BufReader::new(file), &source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_intensities() {
        let map = parse_carbon("region,kg_per_kwh\nZA,0.93\nUS,0.37\n".as_bytes(), "c.csv")
            .unwrap();
        assert_eq!(map["ZA"], 0.93);
        assert_eq!(map["US"], 0.37);
    }

    #[test]
    fn negative_rejected() {
        assert!(parse_carbon("region,kg_per_kwh\nZA,-0.1\n".as_bytes(), "c.csv").is_err());
    }
}

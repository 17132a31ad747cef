//! Gamma-table CSV: `key,gamma_on,gamma_off`.
//!
//! A direct source of per-location WUE figures for footprint estimation,
//! used instead of recomputing them from weather and fuel-mix inputs
//! (for instance, to feed in published dataset values as fixtures).

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

pub fn parse_gammas(
    reader: impl Read,
    source: &str,
) -> Result<BTreeMap<String, (f64, f64)>, Error> {
    let table = read_table(reader, source)?;
    check_columns(&table, &["key", "gamma_on", "gamma_off"], &[], &[])?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut map: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();

    let parse_gamma = |raw: &str, what: &str| {
        parse_f64(raw, what).and_then(|v| {
            if v.is_finite() && v >= 0.0 {
                Ok(v)
            } else {
                Err(format!("{what} {v} must be >= 0"))
            }
        })
    };

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }
        let key = index
            .get(fields, "key")
            .ok_or_else(|| "missing key".to_string())
            .map(|k| k.to_ascii_uppercase());
        let gamma_on = index
            .get(fields, "gamma_on")
            .ok_or_else(|| "missing gamma_on".to_string())
            .and_then(|raw| parse_gamma(raw, "gamma_on"));
        let gamma_off = index
            .get(fields, "gamma_off")
            .ok_or_else(|| "missing gamma_off".to_string())
            .and_then(|raw| parse_gamma(raw, "gamma_off"));
        let (key, gamma_on, gamma_off) = match (key, gamma_on, gamma_off) {
            (Ok(k), Ok(on), Ok(off)) => (k, on, off),
            (k, on, off) => {
                for message in [k.err(), on.err(), off.err()].into_iter().flatten() {
                    push(message);
                }
                continue;
            }
        };
        if let Some(&previous_line) = seen.get(&key) {
            push(format!(
                "duplicate key {key:?} (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(key.clone(), line);
        map.insert(key, (gamma_on, gamma_off));
    }

    finish(source, issues)?;
    Ok(map)
}

pub fn parse_gammas_path(path: &Path) -> Result<BTreeMap<String, (f64, f64)>, Error> {
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    parse_gammas(std::io::BufReader::new(file), &source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gamma_pairs() {
        let map = parse_gammas(
            "key,gamma_on,gamma_off\nza,1.72,4.1\nUS,0.55,2.24\n".as_bytes(),
            "g.csv",
        )
        .unwrap();
        assert_eq!(map["ZA"], (1.72, 4.1));
        assert_eq!(map["US"], (0.55, 2.24));
    }

    #[test]
    fn negative_gamma_rejected() {
        assert!(
            parse_gammas("key,gamma_on,gamma_off\nZA,-1.0,4.1\n".as_bytes(), "g.csv").is_err()
        );
    }
}

//! Region-map CSV: `country,region`. A supplied file replaces the built-in
//! map entirely; without one the built-in eleven-country map applies.

use std::io::Read;
use std::path::Path;

use aquameter_core::{builtin_region_map, RegionMap};

use crate::error::{Error, Issue};

use super::{check_columns, finish, read_table, HeaderIndex};

pub fn parse_region_map(reader: impl Read, source: &str) -> Result<RegionMap, Error> {
    let table = read_table(reader, source)?;
    check_columns(&table, &["country", "region"], &[], &[])?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut map = RegionMap::new();
    let mut seen: std::collections::BTreeMap<String, u64> = std::collections::BTreeMap::new();

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }
        let country = index
            .get(fields, "country")
            .ok_or_else(|| "missing country".to_string())
            .and_then(|c| {
                aquameter_core::normalize_country_code(c).map_err(|e| e.to_string())
            });
        let region = index
            .get(fields, "region")
            .ok_or_else(|| "missing region".to_string())
            .map(str::to_string);
        let (country, region) = match (country, region) {
            (Ok(c), Ok(r)) => (c, r),
            (c, r) => {
                for message in [c.err(), r.err()].into_iter().flatten() {
                    push(message);
                }
                continue;
            }
        };
        if let Some(&previous_line) = seen.get(&country) {
            push(format!(
                "duplicate country {country} (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(country.clone(), line);
        map.insert(&country, &region)
            .unwrap_or_else(|e| push(e.to_string()));
    }

    finish(source, issues)?;
    Ok(map)
}

pub fn load_region_map(path: Option<&Path>) -> Result<RegionMap, Error> {
    match path {
        None => Ok(builtin_region_map()),
        Some(path) => {
            let source = path.display().to_string();
            let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
            parse_region_map(std::io::BufReader::new(file), &source)
        }
    }
}

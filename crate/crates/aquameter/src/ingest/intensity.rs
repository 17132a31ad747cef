//! Water-intensity CSV: `fuel,l_per_kwh`.

use std::io::{Read, Write};
use std::path::Path;

use aquameter_core::WaterIntensityTable;

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

pub fn parse_water_intensity(
    reader: impl Read,
    source: &str,
) -> Result<WaterIntensityTable, Error> {
    let table = read_table(reader, source)?;
    check_columns(&table, &["fuel", "l_per_kwh"], &[], &[])?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut intensities = WaterIntensityTable::new();
    let mut seen: std::collections::BTreeMap<String, u64> = std::collections::BTreeMap::new();

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }
        let fuel = index
            .get(fields, "fuel")
            .ok_or_else(|| "missing fuel".to_string())
            .map(str::to_string);
        let value = index
            .get(fields, "l_per_kwh")
            .ok_or_else(|| "missing l_per_kwh".to_string())
            .and_then(|raw| parse_f64(raw, "l_per_kwh"));
        let (fuel, value) = match (fuel, value) {
            (Ok(f), Ok(v)) => (f, v),
            (f, v) => {
                for message in [f.err(), v.err()].into_iter().flatten() {
                    push(message);
                }
                continue;
            }
        };
        if let Some(&previous_line) = seen.get(&fuel) {
            push(format!(
                "duplicate fuel {fuel:?} (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(fuel.clone(), line);
        intensities
            .insert(&fuel, value)
            .unwrap_or_else(|e| push(e.to_string()));
    }

    finish(source, issues)?;
    Ok(intensities)
}

pub fn parse_water_intensity_path(path: &Path) -> Result<WaterIntensityTable, Error> {
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    parse_water_intensity(std::io::BufReader::new(file), &source)
}

pub fn write_intensity_csv(
    intensities: &WaterIntensityTable,
    mut writer: impl Write,
) -> std::io::Result<()> {
    writeln!(writer, "fuel,l_per_kwh")?;
    for (fuel, value) in intensities.iter() {
        writeln!(writer, "{fuel},{value}")?;
    }
    Ok(())
}

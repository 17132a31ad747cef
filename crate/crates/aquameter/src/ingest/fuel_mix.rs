//! Fuel-mix CSV: `country,year,fuel,generation` or `country,year,fuel,share`.
//!
//! Absolute generation and fractional shares are interchangeable because the
//! offsite WUE is scale-invariant; a file must pick one column though, and
//! shares per (country, year) have to sum to 1 within rounding tolerance.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use aquameter_core::FuelMixTable;

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

/// Accepted band for per-group share sums, tolerance for published rounding.
pub const SHARE_SUM_MIN: f64 = 0.98;
pub const SHARE_SUM_MAX: f64 = 1.02;

pub fn parse_fuel_mix(reader: impl Read, source: &str) -> Result<FuelMixTable, Error> {
    let table = read_table(reader, source)?;
    check_columns(
        &table,
        &["country", "year", "fuel"],
        &[],
        &[&["generation", "share"]],
    )?;
    let index = HeaderIndex::new(&table.headers);
    let share_input = index.has("share");
    let amount_column = if share_input { "share" } else { "generation" };

    let mut issues: Vec<Issue> = Vec::new();
    let mut mix = FuelMixTable::new();
    // (country, year) -> (share sum, first line), for the share-sum check
    let mut group_sums: BTreeMap<(String, i32), (f64, u64)> = BTreeMap::new();
    let mut group_first_line: BTreeMap<(String, i32), u64> = BTreeMap::new();
    let mut seen: BTreeMap<(String, i32, String), u64> = BTreeMap::new();

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
        let year = index
            .get(fields, "year")
            .ok_or_else(|| "missing year".to_string())
            .and_then(|y| {
                y.parse::<i32>()
                    .map_err(|_| format!("unparseable year: {y:?}"))
            });
        let fuel = index
            .get(fields, "fuel")
            .ok_or_else(|| "missing fuel".to_string())
            .map(str::to_string);
        let amount = index
            .get(fields, amount_column)
            .ok_or_else(|| format!("missing {amount_column}"))
            .and_then(|raw| parse_f64(raw, amount_column))
            .and_then(|value| {
                if value.is_finite() && value >= 0.0 {
                    Ok(value)
                } else {
                    Err(format!("negative {amount_column}: {value}"))
                }
            });

        let (country, year, fuel, amount) = match (country, year, fuel, amount) {
            (Ok(c), Ok(y), Ok(f), Ok(a)) => (c, y, f, a),
            (c, y, f, a) => {
                for message in [c.err(), y.err(), f.err(), a.err()].into_iter().flatten() {
                    push(message);
                }
                continue;
            }
        };

        let key = (country.clone(), year, fuel.clone());
        if let Some(&previous_line) = seen.get(&key) {
            push(format!(
                "duplicate fuel {fuel:?} for {country} in {year} (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(key, line);
        group_first_line.entry((country.clone(), year)).or_insert(line);
        if share_input {
            let sum = group_sums.entry((country.clone(), year)).or_insert((0.0, line));
            sum.0 += amount;
        }
        mix.insert(&country, year, &fuel, amount)
            .unwrap_or_else(|e| push(e.to_string()));
    }

    if share_input {
        for ((country, year), (sum, line)) in &group_sums {
            if !(SHARE_SUM_MIN..=SHARE_SUM_MAX).contains(sum) {
                issues.push(Issue {
                    line: *line,
                    message: format!(
                        "shares for {country} in {year} sum to {sum}, outside [{SHARE_SUM_MIN}, {SHARE_SUM_MAX}]"
                    ),
                });
            }
        }
    }
    // every group needs at least one positively generating fuel
    for ((country, year), group) in mix.iter() {
        if !group.values().any(|&g| g > 0.0) {
            issues.push(Issue {
                line: group_first_line
                    .get(&(country.clone(), *year))
                    .copied()
                    .unwrap_or(0),
                message: format!("no fuel with positive generation for {country} in {year}"),
            });
        }
    }

    finish(source, issues)?;
    Ok(mix)
}

pub fn parse_fuel_mix_path(path: &Path) -> Result<FuelMixTable, Error> {
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    parse_fuel_mix(std::io::BufReader::new(file), &source)
}

/// Canonical serialization in generation form, shortest float form.
pub fn write_fuel_mix_csv(mix: &FuelMixTable, mut writer: impl Write) -> std::io::Result<()> {
    writeln!(writer, "country,year,fuel,generation")?;
    for ((country, year), group) in mix.iter() {
        for (fuel, generation) in group {
            writeln!(writer, "{country},{year},{fuel},{generation}")?;
        }
    }
    Ok(())
}

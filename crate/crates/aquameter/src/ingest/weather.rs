//! Weather CSV: `timestamp,country,wet_bulb_c|wet_bulb_f,humidity,precip_mm`.
//!
//! Timestamps are ISO 8601 UTC at hour resolution and must be strictly
//! increasing within each country. Temperatures arrive in exactly one unit
//! column and are canonicalized to Fahrenheit here, at the boundary.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use aquameter_core::chrono::{DateTime, Timelike, Utc};
use aquameter_core::{HourlyWeatherRecord, WetBulbTemp};

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

fn parse_timestamp(field: &str) -> Result<DateTime<Utc>, String> {
    let parsed = DateTime::parse_from_rfc3339(field)
        .map_err(|_| format!("unparseable timestamp: {field:?}"))?;
    if parsed.offset().local_minus_utc() != 0 {
        return Err(format!("timestamp {field:?} is not UTC"));
    }
    let utc = parsed.with_timezone(&Utc);
    if utc.minute() != 0 || utc.second() != 0 || utc.nanosecond() != 0 {
        return Err(format!("timestamp {field:?} is not hour-aligned"));
    }
    Ok(utc)
}

pub fn parse_weather(
    reader: impl Read,
    source: &str,
) -> Result<(Vec<HourlyWeatherRecord>, Vec<String>), Error> {
    let table = read_table(reader, source)?;
    check_columns(
        &table,
        &["timestamp", "country"],
        &["humidity", "precip_mm"],
        &[&["wet_bulb_c", "wet_bulb_f"]],
    )?;
    let index = HeaderIndex::new(&table.headers);
    let celsius_input = index.has("wet_bulb_c");

    let mut issues: Vec<Issue> = Vec::new();
    let mut records = Vec::new();
    // country -> (last timestamp, its line) for monotonicity checks
    let mut last_seen: BTreeMap<String, (DateTime<Utc>, u64)> = BTreeMap::new();

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }

        let timestamp = index
            .get(fields, "timestamp")
            .ok_or_else(|| "missing timestamp".to_string())
            .and_then(parse_timestamp);
        let country = index
            .get(fields, "country")
            .ok_or_else(|| "missing country".to_string())
            .and_then(|c| {
                aquameter_core::normalize_country_code(c).map_err(|e| e.to_string())
            });
        let temp_column = if celsius_input { "wet_bulb_c" } else { "wet_bulb_f" };
        let wet_bulb = index
            .get(fields, temp_column)
            .ok_or_else(|| format!("missing {temp_column}"))
            .and_then(|raw| parse_f64(raw, temp_column))
            .and_then(|value| {
                let built = if celsius_input {
                    WetBulbTemp::from_celsius(value)
                } else {
                    WetBulbTemp::from_fahrenheit(value)
                };
                built.map_err(|e| e.to_string())
            });
        let humidity = match index.get(fields, "humidity") {
            None => Ok(None),
            Some(raw) => parse_f64(raw, "humidity").and_then(|h| {
                if (0.0..=100.0).contains(&h) {
                    Ok(Some(h))
                } else {
                    Err(format!("humidity {h} outside [0, 100]"))
                }
            }),
        };
        let precipitation = match index.get(fields, "precip_mm") {
            None => Ok(None),
            Some(raw) => parse_f64(raw, "precip_mm").and_then(|p| {
                if p >= 0.0 && p.is_finite() {
                    Ok(Some(p))
                } else {
                    Err(format!("precip_mm {p} must be >= 0"))
                }
            }),
        };

        let (timestamp, country, wet_bulb, humidity, precipitation) =
            match (timestamp, country, wet_bulb, humidity, precipitation) {
                (Ok(t), Ok(c), Ok(w), Ok(h), Ok(p)) => (t, c, w, h, p),
                (t, c, w, h, p) => {
                    for message in [t.err(), c.err(), w.err(), h.err(), p.err()]
                        .into_iter()
                        .flatten()
                    {
                        push(message);
                    }
                    continue;
                }
            };

        match last_seen.get(&country) {
            Some(&(previous, previous_line)) if timestamp == previous => {
                push(format!(
                    "duplicate timestamp {timestamp} for {country} (also on line {previous_line})"
                ));
                continue;
            }
            Some(&(previous, previous_line)) if timestamp < previous => {
                push(format!(
                    "timestamps for {country} are not increasing: {timestamp} after {previous} (line {previous_line})"
                ));
                continue;
            }
            _ => {}
        }
        last_seen.insert(country.clone(), (timestamp, line));
        records.push(HourlyWeatherRecord {
            timestamp,
            country,
            wet_bulb,
            humidity,
            precipitation,
        });
    }

    finish(source, issues)?;
    let mut warnings = Vec::new();
    if records.is_empty() {
        warnings.push(format!("{source}: no data rows (header only)"));
    }
    Ok((records, warnings))
}

pub fn parse_weather_path(path: &Path) -> Result<(Vec<HourlyWeatherRecord>, Vec<String>), Error> {
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    parse_weather(std::io::BufReader::new(file), &source)
}

/// Canonical serialization: Fahrenheit temperatures, shortest float form so
/// parse -> serialize -> parse is the identity on the table.
pub fn write_weather_csv(
    records: &[HourlyWeatherRecord],
    mut writer: impl Write,
) -> std::io::Result<()> {
    writeln!(writer, "timestamp,country,wet_bulb_f,humidity,precip_mm")?;
    for r in records {
        writeln!(
            writer,
            "{},{},{},{},{}",
            r.timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
            r.country,
            r.wet_bulb.fahrenheit(),
            r.humidity.map(|h| h.to_string()).unwrap_or_default(),
            r.precipitation.map(|p| p.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

//! Deterministic dataset emission.
//!
//! All numeric output is fixed at six decimals and every map is sorted, so
//! identical inputs produce byte-identical files. JSON numbers are quantized
//! through the same six-decimal formatter the CSVs use, which keeps the two
//! formats in exact value agreement.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use aquameter_core::chrono::{DateTime, Utc};
use aquameter_core::{
    ComparisonTable, CountryOffsite, MonthlyAggregate, RegionMap, RegionalComparison, WueSeries,
};
use serde_json::{json, Value};

use crate::error::Error;
use crate::run::BuildOutput;

/// Fixed six-decimal rendering used by every export and stdout table.
pub fn fmt6(value: f64) -> String {
    format!("{value:.6}")
}

/// The f64 a six-decimal rendering parses back to; quantizing JSON values
/// through this guarantees cross-format agreement with the CSVs.
pub fn quantize6(value: f64) -> f64 {
    fmt6(value).parse().expect("fixed-decimal float reparses")
}

pub fn fmt_timestamp(ts: DateTime<Utc>) -> String {
    ts.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    let source = path.display().to_string();
    fs::write(path, contents).map_err(|e| Error::io(&source, e))
}

/// One hourly series as CSV under the given value column name.
pub fn render_series_csv(points: &[(DateTime<Utc>, f64)], value_column: &str) -> String {
    let mut out = String::with_capacity(32 * (points.len() + 1));
    out.push_str("timestamp,");
    out.push_str(value_column);
    out.push('\n');
    for &(ts, value) in points {
        out.push_str(&fmt_timestamp(ts));
        out.push(',');
        out.push_str(&fmt6(value));
        out.push('\n');
    }
    out
}

/// Reads a series CSV back: `timestamp,<value column>`.
pub fn read_series_csv(
    reader: impl Read,
    source: &str,
) -> Result<Vec<(DateTime<Utc>, f64)>, Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|inner| Error::Csv {
            file: source.into(),
            inner,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| {
            Error::Validation(crate::error::ValidationReport {
                source: source.into(),
                issues: vec![crate::error::Issue { line, message }],
            })
        };
        let ts = record
            .get(0)
            .ok_or_else(|| bad("missing timestamp".into()))?;
        let ts = DateTime::parse_from_rfc3339(ts)
            .map_err(|_| bad(format!("unparseable timestamp: {ts:?}")))?
            .with_timezone(&Utc);
        let value = record.get(1).ok_or_else(|| bad("missing value".into()))?;
        let value: f64 = value
            .parse()
            .map_err(|_| bad(format!("unparseable value: {value:?}")))?;
        points.push((ts, value));
    }
    Ok(points)
}

pub fn read_series_csv_path(path: &Path) -> Result<Vec<(DateTime<Utc>, f64)>, Error> {
    let source = path.display().to_string();
    let file = fs::File::open(path).map_err(|e| Error::io(&source, e))?;
    read_series_csv(std::io::BufReader::new(file), &source)
}

fn month_entries(months: &[MonthlyAggregate]) -> Value {
    Value::Array(
        months
            .iter()
            .map(|m| {
                json!({
                    "month": m.month.to_string(),
                    "coverage": quantize6(m.coverage),
                    "mean_onsite": m.mean_onsite.map(quantize6),
                })
            })
            .collect(),
    )
}

fn offsite_entry(offsite: &CountryOffsite) -> Value {
    json!({
        "year": offsite.year,
        "gamma_off": quantize6(offsite.gamma_off),
        "breakdown": offsite
            .fuel_breakdown
            .iter()
            .map(|w| json!({
                "fuel": w.fuel,
                "share": quantize6(w.share),
                "l_per_kwh": quantize6(w.intensity),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn render_summary_json(output: &BuildOutput) -> String {
    let mut countries = serde_json::Map::new();
    for (country, series) in &output.series {
        let values: Vec<f64> = series.points.iter().map(|&(_, v)| v).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let entry = json!({
            "records": series.points.len(),
            "gamma_on": series.mean().map(quantize6),
            "onsite_min": if values.is_empty() { Value::Null } else { json!(quantize6(min)) },
            "onsite_max": if values.is_empty() { Value::Null } else { json!(quantize6(max)) },
            "offsite": output.offsite.get(country).map(offsite_entry),
            "months": month_entries(&output.monthly[country]),
        });
        countries.insert(country.clone(), entry);
    }
    let summary = json!({
        "formula": output.formula.to_string(),
        "coverage_threshold": quantize6(output.coverage_threshold),
        "countries": Value::Object(countries),
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Writes the dataset layout: `onsite/<country>.csv`, `offsite/<country>.csv`
/// and `summary.json`. The offsite series is the annual constant broadcast
/// over the country's weather hours.
pub fn write_dataset(dir: &Path, output: &BuildOutput) -> Result<(), Error> {
    let onsite_dir = dir.join("onsite");
    let offsite_dir = dir.join("offsite");
    for d in [dir, &onsite_dir, &offsite_dir] {
        fs::create_dir_all(d).map_err(|e| Error::io(&d.display().to_string(), e))?;
    }
    for (country, series) in &output.series {
        write_file(
            &onsite_dir.join(format!("{country}.csv")),
            &render_series_csv(&series.points, "onsite_l_per_kwh"),
        )?;
        if let Some(offsite) = output.offsite.get(country) {
            let broadcast: Vec<(DateTime<Utc>, f64)> = series
                .points
                .iter()
                .map(|&(ts, _)| (ts, offsite.gamma_off))
                .collect();
            write_file(
                &offsite_dir.join(format!("{country}.csv")),
                &render_series_csv(&broadcast, "offsite_l_per_kwh"),
            )?;
        }
    }
    write_file(&dir.join("summary.json"), &render_summary_json(output))
}

/// Per-location gammas out of a dataset directory's `summary.json`,
/// `key -> (gamma_on, gamma_off)`.
pub fn read_summary_gammas(dir: &Path) -> Result<BTreeMap<String, (f64, f64)>, Error> {
    let path = dir.join("summary.json");
    let source = path.display().to_string();
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&source, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|inner| Error::Json {
        context: source.clone(),
        inner,
    })?;
    let countries = value
        .get("countries")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Input(format!("{source}: no countries object")))?;
    let mut gammas = BTreeMap::new();
    for (country, entry) in countries {
        let gamma_on = entry.get("gamma_on").and_then(Value::as_f64);
        let gamma_off = entry
            .get("offsite")
            .and_then(|o| o.get("gamma_off"))
            .and_then(Value::as_f64);
        if let (Some(gamma_on), Some(gamma_off)) = (gamma_on, gamma_off) {
            gammas.insert(country.clone(), (gamma_on, gamma_off));
        }
    }
    if gammas.is_empty() {
        return Err(Error::Input(format!(
            "{source}: no usable per-country gamma entries"
        )));
    }
    Ok(gammas)
}

/// Long-format monthly aggregates for plotting:
/// `country,region,month,mean_onsite_l_per_kwh,coverage`. The mean field is
/// empty for months under the coverage threshold.
pub fn render_plot_csv(
    monthly: &BTreeMap<String, Vec<MonthlyAggregate>>,
    regions: &RegionMap,
) -> String {
    let mut out = String::from("country,region,month,mean_onsite_l_per_kwh,coverage\n");
    for (country, aggregates) in monthly {
        let region = regions.get(country).unwrap_or("");
        for aggregate in aggregates {
            out.push_str(&format!(
                "{country},{region},{},{},{}\n",
                aggregate.month,
                aggregate.mean_onsite.map(fmt6).unwrap_or_default(),
                fmt6(aggregate.coverage),
            ));
        }
    }
    out
}

/// Machine-readable comparison export with the pinned column set.
pub fn render_comparison_csv(table: &ComparisonTable) -> String {
    let mut out =
        String::from("rank,key,model,task,onsite_l,offsite_l,total_l,vs_us,vs_global\n");
    for row in &table.rows {
        let r = &row.result;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.rank,
            r.key,
            r.model,
            r.task,
            fmt6(r.onsite_l),
            fmt6(r.offsite_l),
            fmt6(r.total_l),
            row.vs_us.map(|f| f.to_string()).unwrap_or_default(),
            row.vs_global.map(|f| f.to_string()).unwrap_or_default(),
        ));
    }
    out
}

pub fn render_regional_json(comparison: &RegionalComparison) -> String {
    let rows: Vec<Value> = comparison
        .rows
        .iter()
        .map(|r| {
            json!({
                "region": r.region,
                "month": r.month.to_string(),
                "mean_onsite": quantize6(r.mean_onsite),
                "countries": r.countries,
            })
        })
        .collect();
    let max_gap = comparison.max_gap.as_ref().map(|g| {
        json!({
            "month": g.month.to_string(),
            "low_region": g.low_region,
            "high_region": g.high_region,
            "gap": quantize6(g.gap),
            "gap_pct": quantize6(g.gap * 100.0),
        })
    });
    let mut text = serde_json::to_string_pretty(&json!({
        "rows": rows,
        "max_gap": max_gap,
        "warnings": comparison.warnings,
    }))
    .expect("regional comparison serializes");
    text.push('\n');
    text
}

/// Writes `contents` to `path`, creating parent directories as needed.
pub fn write_text(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(&parent.display().to_string(), e))?;
        }
    }
    write_file(path, contents)
}

/// Rebuilds a [`WueSeries`] from an exported onsite CSV.
pub fn reimport_series(
    path: &Path,
    country: &str,
    config: aquameter_core::OnsiteConfig,
) -> Result<WueSeries, Error> {
    Ok(WueSeries {
        country: country.into(),
        config,
        points: read_series_csv_path(path)?,
    })
}

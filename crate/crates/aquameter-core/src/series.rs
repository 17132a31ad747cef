//! Hourly WUE series and their monthly/annual/regional roll-ups.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::{DateTime, Datelike, NaiveDate, Timelike, Utc};

use crate::error::CoreError;
use crate::offsite::{offsite_wue, FuelContribution};
use crate::onsite::OnsiteConfig;
use crate::tables::{FuelMixTable, WaterIntensityTable};
use crate::weather::HourlyWeatherRecord;

/// Default minimum fraction of hours a month must cover before its mean is
/// reported.
pub const DEFAULT_COVERAGE_THRESHOLD: f64 = 0.9;

/// A UTC calendar month bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthKey {
    pub year: i32,
    pub month: u32,
}

impl MonthKey {
    pub fn of(ts: DateTime<Utc>) -> Self {
        Self {
            year: ts.year(),
            month: ts.month(),
        }
    }

    /// Number of hours in this calendar month.
    pub fn hours(self) -> u32 {
        let first = NaiveDate::from_ymd_opt(self.year, self.month, 1)
            .expect("month keys are built from valid timestamps");
        let next = if self.month == 12 {
            NaiveDate::from_ymd_opt(self.year + 1, 1, 1)
        } else {
            NaiveDate::from_ymd_opt(self.year, self.month + 1, 1)
        }
        .expect("valid successor month");
        (next - first).num_days() as u32 * 24
    }
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Hourly onsite WUE for one country under one curve.
///
/// Points are sorted by timestamp with no duplicates (guaranteed by weather
/// validation) and every value is >= 0 (guaranteed by the clamp).
#[derive(Debug, Clone, PartialEq)]
pub struct WueSeries {
    pub country: String,
    pub config: OnsiteConfig,
    pub points: Vec<(DateTime<Utc>, f64)>,
}

impl WueSeries {
    /// Mean over every point in the series; the default onsite gamma for
    /// footprint estimates when the series spans a year.
    pub fn mean(&self) -> Option<f64> {
        if self.points.is_empty() {
            return None;
        }
        let sum: f64 = self.points.iter().map(|&(_, v)| v).sum();
        Some(sum / self.points.len() as f64)
    }

    /// Mean restricted to points at the given UTC hour of day, for
    /// hour-matched workload weighting.
    pub fn hour_matched_mean(&self, hour: u32) -> Option<f64> {
        let mut sum = 0.0;
        let mut n = 0u64;
        for &(ts, v) in &self.points {
            if ts.hour() == hour {
                sum += v;
                n += 1;
            }
        }
        if n == 0 {
            None
        } else {
            Some(sum / n as f64)
        }
    }
}

/// One output point per input record, partitioned by country.
pub fn build_onsite_series(
    records: &[HourlyWeatherRecord],
    config: OnsiteConfig,
) -> BTreeMap<String, WueSeries> {
    let mut out: BTreeMap<String, WueSeries> = BTreeMap::new();
    for record in records {
        let series = out
            .entry(record.country.clone())
            .or_insert_with(|| WueSeries {
                country: record.country.clone(),
                config,
                points: Vec::new(),
            });
        series.points.push((
            record.timestamp,
            config.evaluate_fahrenheit(record.wet_bulb.fahrenheit()),
        ));
    }
    out
}

/// Mean onsite WUE for one UTC calendar month, with hour coverage.
///
/// `mean_onsite` is `None` when coverage fell below the reporting threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyAggregate {
    pub country: String,
    pub month: MonthKey,
    pub mean_onsite: Option<f64>,
    pub coverage: f64,
}

/// Arithmetic mean per UTC calendar month; months whose coverage (present
/// hours / hours in month) falls below `threshold` keep their coverage but
/// have the mean suppressed.
pub fn monthly_means(
    series: &WueSeries,
    threshold: f64,
) -> Result<Vec<MonthlyAggregate>, CoreError> {
    if !threshold.is_finite() || threshold <= 0.0 || threshold > 1.0 {
        return Err(CoreError::InvalidCoverageThreshold { value: threshold });
    }
    let mut buckets: BTreeMap<MonthKey, (f64, u32)> = BTreeMap::new();
    for &(ts, value) in &series.points {
        let bucket = buckets.entry(MonthKey::of(ts)).or_insert((0.0, 0));
        bucket.0 += value;
        bucket.1 += 1;
    }
    Ok(buckets
        .into_iter()
        .map(|(month, (sum, count))| {
            let coverage = f64::from(count) / f64::from(month.hours());
            MonthlyAggregate {
                country: series.country.clone(),
                month,
                mean_onsite: (coverage >= threshold).then(|| sum / f64::from(count)),
                coverage,
            }
        })
        .collect())
}

/// One fuel's weight in a country-year offsite WUE.
#[derive(Debug, Clone, PartialEq)]
pub struct FuelWeight {
    pub fuel: String,
    /// Fraction of total generation, sums to 1 over the breakdown.
    pub share: f64,
    pub intensity: f64,
}

/// Offsite WUE for one country-year with its explanatory fuel breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryOffsite {
    pub country: String,
    pub year: i32,
    pub gamma_off: f64,
    pub fuel_breakdown: Vec<FuelWeight>,
}

impl CountryOffsite {
    /// Recomputes gamma_off from the stored breakdown; matches the stored
    /// value to within tight relative error by construction.
    pub fn recompute(&self) -> f64 {
        self.fuel_breakdown
            .iter()
            .map(|w| w.share * w.intensity)
            .sum()
    }
}

/// Joins the fuel mix for (country, year) with the intensity table and takes
/// the generation-weighted mean. Constant within the year: fuel-mix data is
/// annual, so the hourly offsite series is this value broadcast.
pub fn country_offsite(
    mix: &FuelMixTable,
    intensities: &WaterIntensityTable,
    country: &str,
    year: i32,
) -> Result<CountryOffsite, CoreError> {
    let country = country.to_ascii_uppercase();
    let group = mix
        .get(&country, year)
        .ok_or_else(|| CoreError::MissingCountryYear {
            country: country.clone(),
            year,
        })?;
    let contributions = group
        .iter()
        .map(|(fuel, &energy)| {
            let intensity =
                intensities
                    .get(fuel)
                    .ok_or_else(|| CoreError::MissingFuelIntensity {
                        country: country.clone(),
                        fuel: fuel.clone(),
                    })?;
            Ok(FuelContribution {
                fuel: fuel.clone(),
                energy,
                intensity,
            })
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let wue = offsite_wue(&contributions)?;
    let total: f64 = contributions.iter().map(|c| c.energy).sum();
    let fuel_breakdown = contributions
        .iter()
        .map(|c| FuelWeight {
            fuel: c.fuel.clone(),
            share: c.energy / total,
            intensity: c.intensity,
        })
        .collect();
    Ok(CountryOffsite {
        country,
        year,
        gamma_off: wue.liters_per_kwh,
        fuel_breakdown,
    })
}

/// Mean onsite WUE of one region in one month (countries weighted equally).
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMonth {
    pub region: String,
    pub month: MonthKey,
    pub mean_onsite: f64,
    /// Number of countries contributing to the mean.
    pub countries: u32,
}

/// The widest spread between two regions' means in any single month.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthGap {
    pub month: MonthKey,
    pub low_region: String,
    pub high_region: String,
    /// Relative gap (max - min) / min, as a fraction.
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionalComparison {
    pub rows: Vec<RegionMonth>,
    pub max_gap: Option<MonthGap>,
    pub warnings: Vec<String>,
}

/// Rolls monthly country aggregates up to regions and reports the largest
/// per-month relative gap between any two regions' means.
///
/// Needs at least two regions with reported months; with fewer the
/// comparison is empty and a warning says so. Countries absent from the map
/// and regions whose months were all suppressed are excluded with warnings.
pub fn regional_comparison(
    aggregates: &[MonthlyAggregate],
    regions: &crate::tables::RegionMap,
) -> RegionalComparison {
    let mut warnings = Vec::new();
    let mut unmapped: BTreeSet<&str> = BTreeSet::new();
    let mut silent_regions: BTreeSet<&str> = BTreeSet::new();
    let mut buckets: BTreeMap<(String, MonthKey), (f64, u32)> = BTreeMap::new();

    for aggregate in aggregates {
        let Some(region) = regions.get(&aggregate.country) else {
            unmapped.insert(&aggregate.country);
            continue;
        };
        match aggregate.mean_onsite {
            Some(mean) => {
                let bucket = buckets
                    .entry((region.into(), aggregate.month))
                    .or_insert((0.0, 0));
                bucket.0 += mean;
                bucket.1 += 1;
            }
            None => {
                silent_regions.insert(region);
            }
        }
    }
    for country in unmapped {
        warnings.push(format!("country {country} is not in the region map; excluded"));
    }

    let reported: BTreeSet<&str> = buckets.keys().map(|(r, _)| r.as_str()).collect();
    for region in silent_regions {
        if !reported.contains(region) {
            warnings.push(format!("region {region} has no reported months; excluded"));
        }
    }

    if reported.len() < 2 {
        warnings.push("fewer than two regions with reported months; nothing to compare".into());
        return RegionalComparison {
            rows: Vec::new(),
            max_gap: None,
            warnings,
        };
    }

    let rows: Vec<RegionMonth> = buckets
        .iter()
        .map(|((region, month), &(sum, count))| RegionMonth {
            region: region.clone(),
            month: *month,
            mean_onsite: sum / f64::from(count),
            countries: count,
        })
        .collect();

    let mut max_gap: Option<MonthGap> = None;
    let months: BTreeSet<MonthKey> = rows.iter().map(|r| r.month).collect();
    for month in months {
        let in_month: Vec<&RegionMonth> = rows.iter().filter(|r| r.month == month).collect();
        if in_month.len() < 2 {
            continue;
        }
        let low = in_month
            .iter()
            .min_by(|a, b| a.mean_onsite.total_cmp(&b.mean_onsite))
            .expect("non-empty");
        let high = in_month
            .iter()
            .max_by(|a, b| a.mean_onsite.total_cmp(&b.mean_onsite))
            .expect("non-empty");
        if low.mean_onsite <= 0.0 {
            continue; // gap undefined against a zero mean
        }
        let gap = (high.mean_onsite - low.mean_onsite) / low.mean_onsite;
        if max_gap.as_ref().is_none_or(|g| gap > g.gap) {
            max_gap = Some(MonthGap {
                month,
                low_region: low.region.clone(),
                high_region: high.region.clone(),
                gap,
            });
        }
    }

    RegionalComparison {
        rows,
        max_gap,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::RegionMap;
    use crate::temp::WetBulbTemp;
    use alloc::vec;
    use chrono::TimeZone;

    fn ts(y: i32, mo: u32, d: u32, h: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(y, mo, d, h, 0, 0).unwrap()
    }

    fn record(country: &str, t: DateTime<Utc>, f: f64) -> HourlyWeatherRecord {
        HourlyWeatherRecord {
            timestamp: t,
            country: country.into(),
            wet_bulb: WetBulbTemp::from_fahrenheit(f).unwrap(),
            humidity: None,
            precipitation: None,
        }
    }

    const EQ2_AT_77: f64 = 1.5817648;

    #[test]
    fn constant_series() {
        let records: Vec<_> = (0..24)
            .map(|h| record("EG", ts(2023, 9, 1, h), 77.0))
            .collect();
        let series = build_onsite_series(&records, OnsiteConfig::FixedColdWater);
        assert_eq!(series.len(), 1);
        let eg = &series["EG"];
        assert_eq!(eg.points.len(), 24);
        for &(_, v) in &eg.points {
            assert!((v - EQ2_AT_77).abs() < 1e-12);
        }
        assert!((eg.mean().unwrap() - EQ2_AT_77).abs() < 1e-12);
    }

    #[test]
    fn empty_and_partitioned() {
        assert!(build_onsite_series(&[], OnsiteConfig::FixedColdWater).is_empty());
        let records = vec![
            record("EG", ts(2023, 9, 1, 0), 77.0),
            record("CG", ts(2023, 9, 1, 0), 70.0),
            record("EG", ts(2023, 9, 1, 1), 78.0),
        ];
        let series = build_onsite_series(&records, OnsiteConfig::FixedColdWater);
        assert_eq!(series.len(), 2);
        assert_eq!(series["EG"].points.len(), 2);
        assert_eq!(series["CG"].points.len(), 1);
    }

    #[test]
    fn month_hours() {
        assert_eq!(MonthKey { year: 2023, month: 9 }.hours(), 720);
        assert_eq!(MonthKey { year: 2023, month: 12 }.hours(), 744);
        assert_eq!(MonthKey { year: 2024, month: 2 }.hours(), 696); // leap year
    }

    #[test]
    fn monthly_mean_full_coverage() {
        // September 2023 has 720 hours.
        let mut points = Vec::new();
        for d in 1..=30 {
            for h in 0..24 {
                points.push((ts(2023, 9, d, h), 2.0));
            }
        }
        let series = WueSeries {
            country: "EG".into(),
            config: OnsiteConfig::FixedColdWater,
            points,
        };
        let months = monthly_means(&series, 0.9).unwrap();
        assert_eq!(months.len(), 1);
        assert_eq!(months[0].coverage, 1.0);
        assert_eq!(months[0].mean_onsite, Some(2.0));
        assert_eq!(months[0].month.to_string(), "2023-09");
    }

    #[test]
    fn half_coverage_is_suppressed() {
        // 360 of 720 hours: coverage 0.5, below the 0.9 default.
        let mut points = Vec::new();
        for d in 1..=15 {
            for h in 0..24 {
                points.push((ts(2023, 9, d, h), 2.0));
            }
        }
        let series = WueSeries {
            country: "EG".into(),
            config: OnsiteConfig::FixedColdWater,
            points,
        };
        let months = monthly_means(&series, DEFAULT_COVERAGE_THRESHOLD).unwrap();
        assert_eq!(months[0].coverage, 0.5);
        assert_eq!(months[0].mean_onsite, None);
    }

    #[test]
    fn permutation_invariant() {
        let forward = vec![
            (ts(2023, 9, 1, 0), 1.0),
            (ts(2023, 9, 1, 1), 2.0),
            (ts(2023, 9, 1, 2), 4.0),
        ];
        let mut reversed = forward.clone();
        reversed.reverse();
        let make = |points| WueSeries {
            country: "EG".into(),
            config: OnsiteConfig::FixedColdWater,
            points,
        };
        let a = monthly_means(&make(forward), 0.001).unwrap();
        let b = monthly_means(&make(reversed), 0.001).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_is_validated() {
        let series = WueSeries {
            country: "EG".into(),
            config: OnsiteConfig::FixedColdWater,
            points: vec![],
        };
        for bad in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                monthly_means(&series, bad),
                Err(CoreError::InvalidCoverageThreshold { .. })
            ));
        }
        assert!(monthly_means(&series, 1.0).is_ok());
    }

    fn tables() -> (FuelMixTable, WaterIntensityTable) {
        let mut mix = FuelMixTable::new();
        mix.insert("CG", 2023, "hydro", 1.0).unwrap();
        mix.insert("EG", 2023, "hydro", 0.5).unwrap();
        mix.insert("EG", 2023, "solar", 0.5).unwrap();
        let mut intensities = WaterIntensityTable::new();
        intensities.insert("hydro", 17.0).unwrap();
        intensities.insert("solar", 1.0).unwrap();
        (mix, intensities)
    }

    #[test]
    fn single_fuel_country() {
        let (mix, intensities) = tables();
        let offsite = country_offsite(&mix, &intensities, "CG", 2023).unwrap();
        assert_eq!(offsite.gamma_off, 17.0);
        assert_eq!(offsite.fuel_breakdown.len(), 1);
        assert_eq!(offsite.fuel_breakdown[0].share, 1.0);
    }

    #[test]
    fn even_split_country() {
        let (mix, intensities) = tables();
        let offsite = country_offsite(&mix, &intensities, "EG", 2023).unwrap();
        assert_eq!(offsite.gamma_off, 9.0);
        let recomputed = offsite.recompute();
        assert!((recomputed - offsite.gamma_off).abs() <= 1e-12 * offsite.gamma_off);
    }

    #[test]
    fn missing_keys_are_named() {
        let (mix, intensities) = tables();
        assert_eq!(
            country_offsite(&mix, &intensities, "CG", 1999),
            Err(CoreError::MissingCountryYear {
                country: "CG".into(),
                year: 1999
            })
        );
        let empty = WaterIntensityTable::new();
        assert_eq!(
            country_offsite(&mix, &empty, "CG", 2023),
            Err(CoreError::MissingFuelIntensity {
                country: "CG".into(),
                fuel: "hydro".into()
            })
        );
    }

    fn aggregate(country: &str, month: u32, mean: Option<f64>) -> MonthlyAggregate {
        MonthlyAggregate {
            country: country.into(),
            month: MonthKey { year: 2023, month },
            mean_onsite: mean,
            coverage: if mean.is_some() { 1.0 } else { 0.1 },
        }
    }

    fn two_region_map() -> RegionMap {
        let mut map = RegionMap::new();
        map.insert("EG", "desert").unwrap();
        map.insert("LY", "desert").unwrap();
        map.insert("CG", "rainforest").unwrap();
        map
    }

    #[test]
    fn forty_percent_gap() {
        let regions = two_region_map();
        let aggregates = vec![
            aggregate("EG", 9, Some(1.4)),
            aggregate("CG", 9, Some(1.0)),
        ];
        let cmp = regional_comparison(&aggregates, &regions);
        assert_eq!(cmp.rows.len(), 2);
        let gap = cmp.max_gap.unwrap();
        assert!((gap.gap - 0.4).abs() < 1e-12);
        assert_eq!(gap.low_region, "rainforest");
        assert_eq!(gap.high_region, "desert");
    }

    #[test]
    fn identical_regions_have_zero_gap() {
        let regions = two_region_map();
        let aggregates = vec![
            aggregate("EG", 9, Some(1.2)),
            aggregate("CG", 9, Some(1.2)),
        ];
        let cmp = regional_comparison(&aggregates, &regions);
        assert_eq!(cmp.max_gap.unwrap().gap, 0.0);
    }

    #[test]
    fn single_region_is_empty_with_warning() {
        let regions = two_region_map();
        let aggregates = vec![
            aggregate("EG", 9, Some(1.2)),
            aggregate("LY", 9, Some(1.3)),
        ];
        let cmp = regional_comparison(&aggregates, &regions);
        assert!(cmp.rows.is_empty());
        assert!(cmp.max_gap.is_none());
        assert!(!cmp.warnings.is_empty());
    }

    #[test]
    fn silent_region_excluded_with_warning() {
        let regions = two_region_map();
        let aggregates = vec![
            aggregate("EG", 9, Some(1.2)),
            aggregate("LY", 9, Some(1.4)),
            aggregate("CG", 9, None), // rainforest never reports
        ];
        let cmp = regional_comparison(&aggregates, &regions);
        assert!(cmp.rows.is_empty()); // only desert remains
        assert!(cmp
            .warnings
            .iter()
            .any(|w| w.contains("rainforest")));
    }

    #[test]
    fn regional_means_average_countries() {
        let regions = two_region_map();
        let aggregates = vec![
            aggregate("EG", 9, Some(1.0)),
            aggregate("LY", 9, Some(2.0)),
            aggregate("CG", 9, Some(1.0)),
        ];
        let cmp = regional_comparison(&aggregates, &regions);
        let desert = cmp
            .rows
            .iter()
            .find(|r| r.region == "desert")
            .unwrap();
        assert_eq!(desert.mean_onsite, 1.5);
        assert_eq!(desert.countries, 2);
    }
}

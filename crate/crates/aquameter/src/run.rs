//! Orchestration shared by the CLI subcommands and the integration tests.

use std::collections::BTreeMap;
use std::path::Path;

use aquameter_core::{
    build_onsite_series, check_fuel_coverage, compare, country_offsite, monthly_means,
    regional_comparison, ComparisonTable, CountryOffsite, FuelMixTable, HourlyWeatherRecord,
    MonthlyAggregate, OnsiteConfig, ProfileTable, RegionalComparison, WaterProfile,
    WaterIntensityTable, WueSeries, GLOBAL_KEY, GLOBAL_ONSITE_WUE, US_KEY, US_ONSITE_WUE,
};

use crate::config::RunConfig;
use crate::error::Error;
use crate::export;
use crate::ingest;

/// Per-location WUE pairs: key -> (gamma_on, gamma_off).
pub type GammaPairs = BTreeMap<String, (f64, f64)>;

/// Everything `build` computes before export.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub formula: OnsiteConfig,
    pub coverage_threshold: f64,
    pub series: BTreeMap<String, WueSeries>,
    pub monthly: BTreeMap<String, Vec<MonthlyAggregate>>,
    pub offsite: BTreeMap<String, CountryOffsite>,
    pub warnings: Vec<String>,
}

/// Builds per-country hourly series, monthly aggregates and annual offsite
/// WUE from validated inputs. The fuel-mix year is `year` when given,
/// otherwise each country must carry exactly one year.
pub fn build_dataset(
    records: &[HourlyWeatherRecord],
    mix: &FuelMixTable,
    intensities: &WaterIntensityTable,
    formula: OnsiteConfig,
    coverage_threshold: f64,
    year: Option<i32>,
    warnings: Vec<String>,
) -> Result<BuildOutput, Error> {
    check_fuel_coverage(mix, intensities)?;
    let series = build_onsite_series(records, formula);
    let mut monthly = BTreeMap::new();
    let mut offsite = BTreeMap::new();
    for (country, country_series) in &series {
        monthly.insert(
            country.clone(),
            monthly_means(country_series, coverage_threshold)?,
        );
        let mix_year = match year {
            Some(y) => y,
            None => mix.single_year(country)?,
        };
        offsite.insert(
            country.clone(),
            country_offsite(mix, intensities, country, mix_year)?,
        );
    }
    Ok(BuildOutput {
        formula,
        coverage_threshold,
        series,
        monthly,
        offsite,
        warnings,
    })
}

fn parse_build_inputs(
    config: &RunConfig,
) -> Result<
    (
        Vec<HourlyWeatherRecord>,
        FuelMixTable,
        WaterIntensityTable,
        Vec<String>,
    ),
    Error,
> {
    let weather = config
        .weather
        .as_deref()
        .ok_or_else(|| Error::Input("no weather input: supply --weather or config key".into()))?;
    let fuel_mix = config
        .fuel_mix
        .as_deref()
        .ok_or_else(|| Error::Input("no fuel-mix input: supply --fuel-mix or config key".into()))?;
    let intensity = config.intensity.as_deref().ok_or_else(|| {
        Error::Input("no water-intensity input: supply --intensity or config key".into())
    })?;
    let (records, warnings) = ingest::weather::parse_weather_path(weather)?;
    let mix = ingest::fuel_mix::parse_fuel_mix_path(fuel_mix)?;
    let intensities = ingest::intensity::parse_water_intensity_path(intensity)?;
    Ok((records, mix, intensities, warnings))
}

/// The `build` subcommand: parse, compute, export, and report counts.
pub fn cmd_build(config: &RunConfig) -> Result<String, Error> {
    config.validate_paths()?;
    let out_dir = config
        .out_dir
        .as_deref()
        .ok_or_else(|| Error::Input("no output directory: supply --out or config key".into()))?;
    let (records, mix, intensities, warnings) = parse_build_inputs(config)?;
    let output = build_dataset(
        &records,
        &mix,
        &intensities,
        config.formula_or_default(),
        config.threshold_or_default(),
        config.year,
        warnings,
    )?;
    export::write_dataset(out_dir, &output)?;

    let mut report = String::new();
    report.push_str(&format!(
        "built {} (formula {}, coverage threshold {})\n",
        out_dir.display(),
        output.formula,
        export::fmt6(output.coverage_threshold),
    ));
    for (country, series) in &output.series {
        let gamma_off = output
            .offsite
            .get(country)
            .map(|o| export::fmt6(o.gamma_off))
            .unwrap_or_default();
        report.push_str(&format!(
            "{country}: {} records, gamma_on {}, gamma_off {}\n",
            series.points.len(),
            series.mean().map(export::fmt6).unwrap_or_default(),
            gamma_off,
        ));
    }
    if output.warnings.is_empty() {
        report.push_str("warnings: none\n");
    } else {
        report.push_str(&format!("warnings: {}\n", output.warnings.len()));
        for warning in &output.warnings {
            report.push_str(&format!("  {warning}\n"));
        }
    }
    Ok(report)
}

/// Resolves the water profile for every requested key.
///
/// Country gammas come from [`gamma_table`]; the `US` and `GLOBAL` baseline
/// keys fall back to their reference onsite WUE and PUE with the offsite
/// WUE taken from configuration (`offsite_us` / `offsite_global`).
pub fn assemble_profiles(
    config: &RunConfig,
    keys: &[String],
    hour: Option<u32>,
) -> Result<ProfileTable, Error> {
    let pue_table = ingest::pue::load_pue_table(config.pue.as_deref())?;
    let carbon = match config.carbon.as_deref() {
        Some(path) => Some(ingest::carbon::parse_carbon_path(path)?),
        None => None,
    };
    let gammas = resolve_gammas(config, hour)?;

    let mut profiles = ProfileTable::new();
    for key in keys {
        let key = key.trim().to_ascii_uppercase();
        if profiles.get(&key).is_some() {
            continue;
        }
        let carbon_intensity = carbon.as_ref().and_then(|c| c.get(&key)).copied();
        let profile = match gammas.as_ref().and_then(|g| g.get(&key)) {
            Some(&(gamma_on, gamma_off)) => {
                let pue = pue_table
                    .get(&key)
                    .ok_or_else(|| aquameter_core::CoreError::MissingPue { key: key.clone() })?;
                WaterProfile {
                    gamma_on,
                    gamma_off,
                    pue,
                    carbon_intensity,
                }
            }
            None if key == US_KEY || key == GLOBAL_KEY => {
                let (gamma_on, gamma_off) = if key == US_KEY {
                    (US_ONSITE_WUE, config.offsite_us)
                } else {
                    (GLOBAL_ONSITE_WUE, config.offsite_global)
                };
                let gamma_off = gamma_off.ok_or_else(|| {
                    Error::Input(format!(
                        "offsite WUE for the {key} baseline is not configured: set {} or pass {}",
                        if key == US_KEY { "offsite_us" } else { "offsite_global" },
                        if key == US_KEY { "--offsite-us" } else { "--offsite-global" },
                    ))
                })?;
                let pue = pue_table
                    .get(&key)
                    .ok_or_else(|| aquameter_core::CoreError::MissingPue { key: key.clone() })?;
                WaterProfile {
                    gamma_on,
                    gamma_off,
                    pue,
                    carbon_intensity,
                }
            }
            None => {
                return Err(Error::Input(format!(
                    "no gamma data for key {key}: supply --gammas, --dataset, or weather/fuel-mix/intensity inputs covering it"
                )))
            }
        };
        profiles.insert(&key, profile);
    }
    Ok(profiles)
}

fn resolve_gammas(config: &RunConfig, hour: Option<u32>) -> Result<Option<GammaPairs>, Error> {
    if let Some(path) = config.gammas.as_deref() {
        return ingest::gammas::parse_gammas_path(path).map(Some);
    }
    if let Some(dir) = config.dataset.as_deref() {
        return export::read_summary_gammas(dir).map(Some);
    }
    if config.weather.is_none() {
        return Ok(None);
    }
    let (records, mix, intensities, _warnings) = parse_build_inputs(config)?;
    check_fuel_coverage(&mix, &intensities)?;
    let series = build_onsite_series(records.as_slice(), config.formula_or_default());
    let mut gammas = BTreeMap::new();
    for (country, country_series) in &series {
        let gamma_on = match hour {
            Some(h) => country_series.hour_matched_mean(h),
            None => country_series.mean(),
        }
        .ok_or_else(|| {
            Error::Input(format!(
                "no onsite observations for {country}{}",
                hour.map(|h| format!(" at hour {h}")).unwrap_or_default()
            ))
        })?;
        let mix_year = match config.year {
            Some(y) => y,
            None => mix.single_year(country)?,
        };
        let offsite = country_offsite(&mix, &intensities, country, mix_year)?;
        gammas.insert(country.clone(), (gamma_on, offsite.gamma_off));
    }
    Ok(Some(gammas))
}

/// Shared implementation of `estimate` and `compare`.
pub fn run_comparison(
    config: &RunConfig,
    keys: &[String],
    model: &str,
    task: &str,
    hour: Option<u32>,
) -> Result<ComparisonTable, Error> {
    config.validate_paths()?;
    if keys.is_empty() {
        return Err(Error::Input("no keys requested".into()));
    }
    let profiles = assemble_profiles(config, keys, hour)?;
    let registry = ingest::energy::load_energy_registry(config.energy.as_deref())?;
    Ok(compare(keys, model, task, &profiles, &registry)?)
}

/// Splits a `--baselines us,global` style flag into baseline keys.
pub fn parse_baselines(raw: &str) -> Result<Vec<String>, Error> {
    let mut keys = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match part.to_ascii_uppercase().as_str() {
            "US" => keys.push(US_KEY.to_string()),
            "GLOBAL" => keys.push(GLOBAL_KEY.to_string()),
            other => {
                return Err(Error::Input(format!(
                    "unknown baseline {other:?}; expected us and/or global"
                )))
            }
        }
    }
    Ok(keys)
}

/// The `export` subcommand payload: plot-ready monthly aggregates and the
/// regional comparison.
pub fn run_export(
    config: &RunConfig,
    plot: Option<&Path>,
    regional: Option<&Path>,
) -> Result<String, Error> {
    config.validate_paths()?;
    if plot.is_none() && regional.is_none() {
        return Err(Error::Input(
            "nothing to export: pass --plot and/or --regional".into(),
        ));
    }
    let weather = config
        .weather
        .as_deref()
        .ok_or_else(|| Error::Input("no weather input: supply --weather or config key".into()))?;
    let (records, warnings) = ingest::weather::parse_weather_path(weather)?;
    let regions = ingest::region::load_region_map(config.region_map.as_deref())?;
    let series = build_onsite_series(&records, config.formula_or_default());
    let threshold = config.threshold_or_default();
    let mut monthly = BTreeMap::new();
    for (country, country_series) in &series {
        monthly.insert(country.clone(), monthly_means(country_series, threshold)?);
    }

    let mut report = String::new();
    if let Some(path) = plot {
        export::write_text(path, &export::render_plot_csv(&monthly, &regions))?;
        report.push_str(&format!("wrote {}\n", path.display()));
    }
    if let Some(path) = regional {
        let aggregates: Vec<MonthlyAggregate> =
            monthly.values().flat_map(|v| v.iter().cloned()).collect();
        let comparison: RegionalComparison = regional_comparison(&aggregates, &regions);
        export::write_text(path, &export::render_regional_json(&comparison))?;
        report.push_str(&format!("wrote {}\n", path.display()));
        for warning in &comparison.warnings {
            report.push_str(&format!("warning: {warning}\n"));
        }
    }
    for warning in &warnings {
        report.push_str(&format!("warning: {warning}\n"));
    }
    Ok(report)
}

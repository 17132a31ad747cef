//! Run configuration: a flat `key = value` file plus flag overrides.
//!
//! A recorded config file makes a run reproducible from one artifact; flags
//! always win over file values. The file path comes from `--config` or the
//! `AQUAMETER_CONFIG` environment variable.
//!
//! Recognized keys (all optional):
//!
//! | key                  | value                                    |
//! |----------------------|------------------------------------------|
//! | weather              | path to weather CSV                      |
//! | fuel_mix             | path to fuel-mix CSV                     |
//! | intensity            | path to water-intensity CSV              |
//! | pue                  | path to PUE override CSV                 |
//! | energy               | path to energy-registry override CSV     |
//! | carbon               | path to carbon-intensity CSV             |
//! | region_map           | path to region-map CSV                   |
//! | gammas               | path to gamma-table CSV                  |
//! | dataset              | path to a built dataset directory        |
//! | out_dir              | output directory for `build`             |
//! | formula              | `approach` or `coldwater`                |
//! | coverage_threshold   | monthly reporting threshold in (0, 1]    |
//! | year                 | fuel-mix year                            |
//! | offsite_us           | offsite WUE for the US baseline, L/kWh   |
//! | offsite_global       | offsite WUE for the GLOBAL baseline      |

use std::path::{Path, PathBuf};

use aquameter_core::OnsiteConfig;

use crate::error::Error;

pub const CONFIG_ENV: &str = "AQUAMETER_CONFIG";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub weather: Option<PathBuf>,
    pub fuel_mix: Option<PathBuf>,
    pub intensity: Option<PathBuf>,
    pub pue: Option<PathBuf>,
    pub energy: Option<PathBuf>,
    pub carbon: Option<PathBuf>,
    pub region_map: Option<PathBuf>,
    pub gammas: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub formula: Option<OnsiteConfig>,
    pub coverage_threshold: Option<f64>,
    pub year: Option<i32>,
    pub offsite_us: Option<f64>,
    pub offsite_global: Option<f64>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(&source, e))?;
        Self::from_str(&text, &source)
    }

    pub fn from_str(text: &str, source: &str) -> Result<Self, Error> {
        let mut config = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = (i + 1) as u64;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Config {
                file: source.into(),
                line,
                message,
            };
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| bad(format!("expected 'key = value', got {trimmed:?}")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if value.is_empty() {
                return Err(bad(format!("empty value for key {key:?}")));
            }
            if seen.contains(&key) {
                return Err(bad(format!("duplicate key {key:?}")));
            }
            seen.push(key.clone());
            let parse_f64 = |what: &str| {
                value
                    .parse::<f64>()
                    .map_err(|_| bad(format!("unparseable {what}: {value:?}")))
            };
            match key.as_str() {
                "weather" => config.weather = Some(value.into()),
                "fuel_mix" => config.fuel_mix = Some(value.into()),
                "intensity" => config.intensity = Some(value.into()),
                "pue" => config.pue = Some(value.into()),
                "energy" => config.energy = Some(value.into()),
                "carbon" => config.carbon = Some(value.into()),
                "region_map" => config.region_map = Some(value.into()),
                "gammas" => config.gammas = Some(value.into()),
                "dataset" => config.dataset = Some(value.into()),
                "out_dir" => config.out_dir = Some(value.into()),
                "formula" => config.formula = Some(value.parse().map_err(bad)?),
                "coverage_threshold" => config.coverage_threshold = Some(parse_f64("threshold")?),
                "year" => {
                    config.year = Some(
                        value
                            .parse::<i32>()
                            .map_err(|_| bad(format!("unparseable year: {value:?}")))?,
                    )
                }
                "offsite_us" => config.offsite_us = Some(parse_f64("offsite_us")?),
                "offsite_global" => config.offsite_global = Some(parse_f64("offsite_global")?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(config)
    }

    /// Loads the explicit path, else the `AQUAMETER_CONFIG` fallback, else
    /// an empty config.
    pub fn load(explicit: Option<&Path>) -> Result<Self, Error> {
        if let Some(path) = explicit {
            return Self::from_file(path);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(RunConfig::default()),
        }
    }

    /// Field-wise overlay; values in `flags` win.
    pub fn overlay(mut self, flags: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($field:ident),+) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })+
            };
        }
        take!(
            weather, fuel_mix, intensity, pue, energy, carbon, region_map, gammas, dataset,
            out_dir, formula, coverage_threshold, year, offsite_us, offsite_global
        );
        self
    }

    /// Checks that every referenced input path exists and is readable.
    pub fn validate_paths(&self) -> Result<(), Error> {
        let inputs = [
            ("weather", &self.weather),
            ("fuel_mix", &self.fuel_mix),
            ("intensity", &self.intensity),
            ("pue", &self.pue),
            ("energy", &self.energy),
            ("carbon", &self.carbon),
            ("region_map", &self.region_map),
            ("gammas", &self.gammas),
            ("dataset", &self.dataset),
        ];
        for (name, path) in inputs {
            if let Some(path) = path {
                if !path.exists() {
                    return Err(Error::Input(format!(
                        "{name} path {} does not exist",
                        path.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn formula_or_default(&self) -> OnsiteConfig {
        self.formula.unwrap_or_default()
    }

    pub fn threshold_or_default(&self) -> f64 {
        self.coverage_threshold
            .unwrap_or(aquameter_core::DEFAULT_COVERAGE_THRESHOLD)
    }
}

//! Immutable lookup tables: fuel mixes, water intensities, PUE, regions.
//!
//! All tables are plain sorted maps built once by ingestion and shared
//! read-only afterwards.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::weather::normalize_country_code;

/// Per-country, per-year electricity generation by fuel type.
///
/// Values may be absolute generation or fractional shares; the offsite WUE
/// computation only uses ratios, so both are stored as-is.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FuelMixTable {
    entries: BTreeMap<(String, i32), BTreeMap<String, f64>>,
}

impl FuelMixTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        country: &str,
        year: i32,
        fuel: &str,
        generation: f64,
    ) -> Result<(), CoreError> {
        let country = normalize_country_code(country)?;
        if !generation.is_finite() || generation < 0.0 {
            return Err(CoreError::NegativeGeneration { fuel: fuel.into() });
        }
        let group = self.entries.entry((country.clone(), year)).or_default();
        if group.contains_key(fuel) {
            return Err(CoreError::DuplicateFuel {
                country,
                year,
                fuel: fuel.into(),
            });
        }
        group.insert(fuel.into(), generation);
        Ok(())
    }

    pub fn get(&self, country: &str, year: i32) -> Option<&BTreeMap<String, f64>> {
        self.entries.get(&(country.to_ascii_uppercase(), year))
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&(String, i32), &BTreeMap<String, f64>)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct years present for a country, ascending.
    pub fn years(&self, country: &str) -> Vec<i32> {
        let country = country.to_ascii_uppercase();
        self.entries
            .keys()
            .filter(|(c, _)| *c == country)
            .map(|&(_, y)| y)
            .collect()
    }

    /// The year to use for a country when none was selected explicitly:
    /// unambiguous only if exactly one year is present.
    pub fn single_year(&self, country: &str) -> Result<i32, CoreError> {
        let years = self.years(country);
        match years.as_slice() {
            [] => Err(CoreError::MissingCountryMix {
                country: country.to_ascii_uppercase(),
            }),
            [year] => Ok(*year),
            _ => Err(CoreError::AmbiguousYear {
                country: country.to_ascii_uppercase(),
                years,
            }),
        }
    }

    /// Every (country, year) group must have at least one fuel with positive
    /// generation.
    pub fn validate(&self) -> Result<(), CoreError> {
        for ((country, year), group) in &self.entries {
            if !group.values().any(|&g| g > 0.0) {
                return Err(CoreError::NoPositiveGeneration {
                    country: country.clone(),
                    year: *year,
                });
            }
        }
        Ok(())
    }
}

/// Water consumption factor per fuel type, L/kWh.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WaterIntensityTable {
    entries: BTreeMap<String, f64>,
}

impl WaterIntensityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, fuel: &str, l_per_kwh: f64) -> Result<(), CoreError> {
        if !l_per_kwh.is_finite() || l_per_kwh < 0.0 {
            return Err(CoreError::NegativeIntensity { fuel: fuel.into() });
        }
        if self.entries.contains_key(fuel) {
            return Err(CoreError::DuplicateIntensity { fuel: fuel.into() });
        }
        self.entries.insert(fuel.into(), l_per_kwh);
        Ok(())
    }

    pub fn get(&self, fuel: &str) -> Option<f64> {
        self.entries.get(fuel).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Checks that every fuel referenced by the mix resolves in the intensity
/// table. Unknown fuels are a hard error, never a default of zero.
pub fn check_fuel_coverage(
    mix: &FuelMixTable,
    intensities: &WaterIntensityTable,
) -> Result<(), CoreError> {
    for ((country, _year), group) in mix.iter() {
        for fuel in group.keys() {
            if intensities.get(fuel).is_none() {
                return Err(CoreError::MissingFuelIntensity {
                    country: country.clone(),
                    fuel: fuel.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Power usage effectiveness per region key (country code, `US`, or `GLOBAL`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PueTable {
    entries: BTreeMap<String, f64>,
}

impl PueTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces an entry; user overrides win over built-ins.
    pub fn insert(&mut self, region: &str, pue: f64) -> Result<(), CoreError> {
        if !pue.is_finite() || pue < 1.0 {
            return Err(CoreError::InvalidPue {
                region: region.into(),
                value: pue,
            });
        }
        self.entries.insert(region.trim().to_ascii_uppercase(), pue);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(&key.trim().to_ascii_uppercase()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Built-in PUE table: country averages for the eleven profiled African
/// countries (lowest published value where several exist) plus the US
/// hyperscale and global colocation references.
pub fn builtin_pue_table() -> PueTable {
    let mut table = PueTable::new();
    for (region, pue) in [
        ("DZ", 2.3),
        ("EG", 2.3),
        ("ET", 1.5),
        ("GA", 1.9),
        ("LY", 2.3),
        ("MA", 2.3),
        ("NA", 2.1),
        ("CG", 2.0),
        ("ZA", 1.4),
        ("TN", 2.3),
        ("RW", 1.7),
        ("US", 1.17),
        ("GLOBAL", 1.42),
    ] {
        table.insert(region, pue).expect("built-in PUE entries are valid");
    }
    table
}

/// Climate region per country, used for regional roll-ups.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionMap {
    entries: BTreeMap<String, String>,
}

impl RegionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, country: &str, region: &str) -> Result<(), CoreError> {
        let country = normalize_country_code(country)?;
        self.entries.insert(country, region.trim().to_string());
        Ok(())
    }

    pub fn get(&self, country: &str) -> Option<&str> {
        self.entries
            .get(&country.to_ascii_uppercase())
            .map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Built-in climate-region map for the eleven profiled countries.
pub fn builtin_region_map() -> RegionMap {
    let mut map = RegionMap::new();
    for (country, region) in [
        ("CG", "rainforest"),
        ("GA", "rainforest"),
        ("RW", "rainforest"),
        ("MA", "savanna"),
        ("TN", "savanna"),
        ("EG", "desert"),
        ("LY", "desert"),
        ("NA", "steppe"),
        ("ET", "steppe"),
        ("DZ", "mediterranean"),
        ("ZA", "mediterranean"),
    ] {
        map.insert(country, region).expect("built-in region entries are valid");
    }
    map
}

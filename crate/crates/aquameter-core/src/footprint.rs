//! Per-task inference water footprints: W_on = gamma_on * E and
//! W_off = gamma_off * rho * E, with E the server energy in kWh.
//!
//! PUE multiplies energy only on the offsite side: facility overhead draws
//! extra electricity (and its embedded water) but is not cooled by the same
//! evaporative loop accounted against server energy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::CoreError;

/// Reference onsite WUE for efficient US hyperscale fleets, L/kWh.
pub const US_ONSITE_WUE: f64 = 0.55;
/// Reference onsite WUE for global colocation fleets, L/kWh.
pub const GLOBAL_ONSITE_WUE: f64 = 1.07;
/// Reference PUE for US hyperscale fleets.
pub const US_PUE: f64 = 1.17;
/// Reference PUE for global colocation fleets.
pub const GLOBAL_PUE: f64 = 1.42;

/// Region key under which the US baseline is filed.
pub const US_KEY: &str = "US";
/// Region key under which the global baseline is filed.
pub const GLOBAL_KEY: &str = "GLOBAL";

/// Confidence grade of an energy figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Uncertainty {
    #[default]
    Standard,
    /// Extrapolated estimate for a proprietary model; treat as first-order.
    High,
}

impl fmt::Display for Uncertainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Uncertainty::Standard => "standard",
            Uncertainty::High => "high",
        })
    }
}

/// Server energy for one (model, task) pair.
///
/// `embedded_pue` records any facility overhead already baked into
/// `energy_wh` (1.0 if none); normalization strips it back out.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub model: String,
    pub task: String,
    /// Output length the figure was measured at; metadata only, never
    /// scales the energy.
    pub output_tokens: u64,
    pub energy_wh: f64,
    pub embedded_pue: f64,
    pub uncertainty: Uncertainty,
}

impl EnergyEstimate {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !self.energy_wh.is_finite() || self.energy_wh <= 0.0 {
            return Err(CoreError::InvalidEnergyWh {
                model: self.model.clone(),
                task: self.task.clone(),
                value: self.energy_wh,
            });
        }
        if !self.embedded_pue.is_finite() || self.embedded_pue < 1.0 {
            return Err(CoreError::InvalidEmbeddedPue {
                model: self.model.clone(),
                task: self.task.clone(),
                value: self.embedded_pue,
            });
        }
        Ok(())
    }
}

/// Server energy in kWh with any embedded facility overhead removed:
/// (energy_wh / embedded_pue) / 1000.
pub fn normalize_energy(estimate: &EnergyEstimate) -> Result<f64, CoreError> {
    estimate.validate()?;
    Ok(estimate.energy_wh / estimate.embedded_pue / 1000.0)
}

/// Lookup of energy estimates keyed by lowercase (model, task).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyRegistry {
    entries: BTreeMap<(String, String), EnergyEstimate>,
}

impl EnergyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces; user entries win over built-ins.
    pub fn insert(&mut self, estimate: EnergyEstimate) -> Result<(), CoreError> {
        estimate.validate()?;
        let key = (
            estimate.model.to_ascii_lowercase(),
            estimate.task.to_ascii_lowercase(),
        );
        self.entries.insert(key, estimate);
        Ok(())
    }

    pub fn get(&self, model: &str, task: &str) -> Result<&EnergyEstimate, CoreError> {
        let key = (model.to_ascii_lowercase(), task.to_ascii_lowercase());
        self.entries.get(&key).ok_or_else(|| {
            let available_tasks: BTreeSet<String> =
                self.entries.keys().map(|(_, t)| t.clone()).collect();
            let available_models: BTreeSet<String> =
                self.entries.keys().map(|(m, _)| m.clone()).collect();
            CoreError::UnknownEnergyEntry {
                model: model.to_string(),
                task: task.to_string(),
                available_tasks: available_tasks.into_iter().collect(),
                available_models: available_models.into_iter().collect(),
            }
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &EnergyEstimate> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Built-in energy registry.
///
/// The report figures are calculator-based estimates with the source's 1.2
/// facility overhead already removed, hence embedded_pue 1.0 here; the email
/// figures are server-level measurements. The GPT-4 rows extrapolate a
/// proprietary architecture and are graded high-uncertainty.
pub fn builtin_energy_registry() -> EnergyRegistry {
    let mut registry = EnergyRegistry::new();
    let entries = [
        ("llama-3-70b", "report-10p", 5000, 52.25, Uncertainty::Standard),
        ("gpt-4", "report-10p", 5000, 4660.0, Uncertainty::High),
        ("llama-3-70b", "email", 250, 10.0, Uncertainty::Standard),
        ("gpt-4", "email", 250, 232.0, Uncertainty::High),
    ];
    for (model, task, output_tokens, energy_wh, uncertainty) in entries {
        registry
            .insert(EnergyEstimate {
                model: model.into(),
                task: task.into(),
                output_tokens,
                energy_wh,
                embedded_pue: 1.0,
                uncertainty,
            })
            .expect("built-in energy entries are valid");
    }
    registry
}

/// W_on = gamma_on * E. No PUE factor: overhead energy is not cooled against
/// the server-energy denominator.
pub fn onsite_water(energy_kwh: f64, gamma_on: f64) -> Result<f64, CoreError> {
    if !energy_kwh.is_finite() || energy_kwh <= 0.0 {
        return Err(CoreError::NonPositiveEnergy { value: energy_kwh });
    }
    if !gamma_on.is_finite() || gamma_on < 0.0 {
        return Err(CoreError::NegativeGamma { value: gamma_on });
    }
    Ok(gamma_on * energy_kwh)
}

/// W_off = gamma_off * rho * E.
pub fn offsite_water(energy_kwh: f64, rho: f64, gamma_off: f64) -> Result<f64, CoreError> {
    if !energy_kwh.is_finite() || energy_kwh <= 0.0 {
        return Err(CoreError::NonPositiveEnergy { value: energy_kwh });
    }
    if !rho.is_finite() || rho < 1.0 {
        return Err(CoreError::InvalidPue {
            region: String::new(),
            value: rho,
        });
    }
    if !gamma_off.is_finite() || gamma_off < 0.0 {
        return Err(CoreError::NegativeGamma { value: gamma_off });
    }
    Ok(gamma_off * rho * energy_kwh)
}

/// Scope-2 carbon pass-through: E * rho * intensity, kg CO2e.
pub fn carbon_scope2(
    energy_kwh: f64,
    rho: f64,
    carbon_intensity: f64,
) -> Result<f64, CoreError> {
    if !energy_kwh.is_finite() || energy_kwh <= 0.0 {
        return Err(CoreError::NonPositiveEnergy { value: energy_kwh });
    }
    if !rho.is_finite() || rho < 1.0 {
        return Err(CoreError::InvalidPue {
            region: String::new(),
            value: rho,
        });
    }
    if !carbon_intensity.is_finite() || carbon_intensity < 0.0 {
        return Err(CoreError::NegativeCarbonIntensity {
            value: carbon_intensity,
        });
    }
    Ok(energy_kwh * rho * carbon_intensity)
}

/// Everything location-specific an estimate needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterProfile {
    /// Onsite WUE, L/kWh (typically the annual mean of the hourly series).
    pub gamma_on: f64,
    /// Offsite WUE, L/kWh.
    pub gamma_off: f64,
    /// Power usage effectiveness, >= 1.
    pub pue: f64,
    /// Grid carbon intensity, kg CO2e per kWh, when supplied.
    pub carbon_intensity: Option<f64>,
}

/// Water profiles keyed by region (country code, `US`, or `GLOBAL`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileTable {
    entries: BTreeMap<String, WaterProfile>,
}

impl ProfileTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: &str, profile: WaterProfile) {
        self.entries
            .insert(key.trim().to_ascii_uppercase(), profile);
    }

    pub fn get(&self, key: &str) -> Option<&WaterProfile> {
        self.entries.get(&key.trim().to_ascii_uppercase())
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Baseline profile for `US` or `GLOBAL` given the offsite WUE those
/// references require as configuration.
pub fn baseline_profile(key: &str, gamma_off: f64, carbon_intensity: Option<f64>) -> Option<WaterProfile> {
    match key.trim().to_ascii_uppercase().as_str() {
        US_KEY => Some(WaterProfile {
            gamma_on: US_ONSITE_WUE,
            gamma_off,
            pue: US_PUE,
            carbon_intensity,
        }),
        GLOBAL_KEY => Some(WaterProfile {
            gamma_on: GLOBAL_ONSITE_WUE,
            gamma_off,
            pue: GLOBAL_PUE,
            carbon_intensity,
        }),
        _ => None,
    }
}

/// Onsite/offsite/total liters (plus optional scope-2 carbon) for one
/// key-model-task triple. `total_l` is exactly `onsite_l + offsite_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintResult {
    pub key: String,
    pub model: String,
    pub task: String,
    pub onsite_l: f64,
    pub offsite_l: f64,
    pub total_l: f64,
    pub carbon_kg: Option<f64>,
    pub uncertainty: Uncertainty,
}

/// Estimates the water footprint of one task run in one location.
pub fn estimate(
    key: &str,
    model: &str,
    task: &str,
    profiles: &ProfileTable,
    registry: &EnergyRegistry,
) -> Result<FootprintResult, CoreError> {
    let entry = registry.get(model, task)?;
    let profile = profiles.get(key).ok_or_else(|| CoreError::MissingProfile {
        key: key.trim().to_ascii_uppercase(),
    })?;
    let energy_kwh = normalize_energy(entry)?;
    let onsite_l = onsite_water(energy_kwh, profile.gamma_on)?;
    let offsite_l = offsite_water(energy_kwh, profile.pue, profile.gamma_off)?;
    let carbon_kg = profile
        .carbon_intensity
        .map(|intensity| carbon_scope2(energy_kwh, profile.pue, intensity))
        .transpose()?;
    Ok(FootprintResult {
        key: key.trim().to_ascii_uppercase(),
        model: entry.model.clone(),
        task: entry.task.clone(),
        onsite_l,
        offsite_l,
        total_l: onsite_l + offsite_l,
        carbon_kg,
        uncertainty: entry.uncertainty,
    })
}

/// Position of a total relative to a baseline total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineFlag {
    Below,
    Above,
    Equal,
}

impl fmt::Display for BaselineFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineFlag::Below => "below",
            BaselineFlag::Above => "above",
            BaselineFlag::Equal => "equal",
        })
    }
}

fn flag_against(total: f64, baseline: f64) -> BaselineFlag {
    if total < baseline {
        BaselineFlag::Below
    } else if total > baseline {
        BaselineFlag::Above
    } else {
        BaselineFlag::Equal
    }
}

/// One ranked comparison line.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// 1-based rank by ascending total.
    pub rank: u32,
    pub result: FootprintResult,
    /// Relative to the `US` row when present in the comparison.
    pub vs_us: Option<BaselineFlag>,
    /// Relative to the `GLOBAL` row when present in the comparison.
    pub vs_global: Option<BaselineFlag>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub model: String,
    pub task: String,
    pub rows: Vec<ComparisonRow>,
}

/// Estimates every key and ranks ascending by total liters, ties broken by
/// key. Any failing key fails the whole comparison: a partial ranking would
/// mislead.
pub fn compare(
    keys: &[String],
    model: &str,
    task: &str,
    profiles: &ProfileTable,
    registry: &EnergyRegistry,
) -> Result<ComparisonTable, CoreError> {
    let unique: BTreeSet<String> = keys
        .iter()
        .map(|k| k.trim().to_ascii_uppercase())
        .collect();
    let mut results = unique
        .iter()
        .map(|key| estimate(key, model, task, profiles, registry))
        .collect::<Result<Vec<_>, CoreError>>()?;
    results.sort_by(|a, b| {
        a.total_l
            .total_cmp(&b.total_l)
            .then_with(|| a.key.cmp(&b.key))
    });
    let us_total = results
        .iter()
        .find(|r| r.key == US_KEY)
        .map(|r| r.total_l);
    let global_total = results
        .iter()
        .find(|r| r.key == GLOBAL_KEY)
        .map(|r| r.total_l);
    let (model_name, task_name) = results
        .first()
        .map(|r| (r.model.clone(), r.task.clone()))
        .unwrap_or_else(|| (model.to_ascii_lowercase(), task.to_ascii_lowercase()));
    let rows = results
        .into_iter()
        .enumerate()
        .map(|(i, result)| ComparisonRow {
            rank: i as u32 + 1,
            vs_us: us_total.map(|b| flag_against(result.total_l, b)),
            vs_global: global_total.map(|b| flag_against(result.total_l, b)),
            result,
        })
        .collect();
    Ok(ComparisonTable {
        model: model_name,
        task: task_name,
        rows,
    })
}

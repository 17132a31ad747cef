//! Computation kernel for data-center water accounting.
//!
//! Everything here is a pure function over owned data: the two empirical
//! onsite WUE curves in wet-bulb temperature, the fuel-mix-weighted offsite
//! WUE, hourly series aggregation, and the per-task inference water
//! footprint equations. No IO, no clocks, no shared state; callers may fan
//! work out across threads freely.
//!
//! The companion `aquameter` crate supplies file formats and the CLI.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod footprint;
pub mod offsite;
pub mod onsite;
pub mod series;
pub mod tables;
pub mod temp;
pub mod weather;

pub use chrono;

pub use error::CoreError;
pub use footprint::{
    baseline_profile, builtin_energy_registry, carbon_scope2, compare, estimate, normalize_energy,
    offsite_water, onsite_water, BaselineFlag, ComparisonRow, ComparisonTable, EnergyEstimate,
    EnergyRegistry, FootprintResult, ProfileTable, Uncertainty, WaterProfile, GLOBAL_KEY,
    GLOBAL_ONSITE_WUE, GLOBAL_PUE, US_KEY, US_ONSITE_WUE, US_PUE,
};
pub use offsite::{offsite_wue, FuelContribution, OffsiteWue};
pub use onsite::{
    onsite_wue, onsite_wue_fixed_approach, onsite_wue_fixed_cold_water, OnsiteConfig, OnsiteWue,
};
pub use series::{
    build_onsite_series, country_offsite, monthly_means, regional_comparison, CountryOffsite,
    FuelWeight, MonthGap, MonthKey, MonthlyAggregate, RegionMonth, RegionalComparison, WueSeries,
    DEFAULT_COVERAGE_THRESHOLD,
};
pub use tables::{
    builtin_pue_table, builtin_region_map, check_fuel_coverage, FuelMixTable, PueTable, RegionMap,
    WaterIntensityTable,
};
pub use temp::{
    celsius_to_fahrenheit, fahrenheit_to_celsius, WetBulbTemp, MAX_PLAUSIBLE_F, MIN_PLAUSIBLE_F,
};
pub use weather::{normalize_country_code, HourlyWeatherRecord};

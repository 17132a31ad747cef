use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced by the computation kernel.
///
/// Every variant names the offending key (country, fuel, model, ...) so that
/// callers can surface actionable messages without extra bookkeeping. Missing
/// data is always an error here, never a silent zero: a defaulted 0 L/kWh
/// would understate footprints.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("temperature is not a finite number")]
    NonFiniteTemperature,

    #[error("wet-bulb temperature {fahrenheit} degF is outside the plausible band [-80, 150] degF")]
    ImplausibleTemperature { fahrenheit: f64 },

    #[error("invalid ISO 3166-1 alpha-2 country code: {code:?}")]
    InvalidCountryCode { code: String },

    #[error("fuel mix is empty")]
    EmptyFuelMix,

    #[error("fuel mix has zero total generation")]
    ZeroTotalGeneration,

    #[error("no fuel with positive generation for {country} in {year}")]
    NoPositiveGeneration { country: String, year: i32 },

    #[error("negative or non-finite generation for fuel {fuel:?}")]
    NegativeGeneration { fuel: String },

    #[error("negative or non-finite water intensity for fuel {fuel:?}")]
    NegativeIntensity { fuel: String },

    #[error("duplicate fuel {fuel:?} for {country} in {year}")]
    DuplicateFuel {
        country: String,
        year: i32,
        fuel: String,
    },

    #[error("duplicate water intensity entry for fuel {fuel:?}")]
    DuplicateIntensity { fuel: String },

    #[error("no fuel mix entry for {country} in {year}")]
    MissingCountryYear { country: String, year: i32 },

    #[error("no fuel mix entries for {country}")]
    MissingCountryMix { country: String },

    #[error("fuel mix for {country} covers several years {years:?}; select one explicitly")]
    AmbiguousYear { country: String, years: Vec<i32> },

    #[error("no water intensity for fuel {fuel:?} referenced by {country}")]
    MissingFuelIntensity { country: String, fuel: String },

    #[error("PUE {value} for {region:?} is invalid (must be finite and >= 1.0)")]
    InvalidPue { region: String, value: f64 },

    #[error("no PUE entry for {key:?}")]
    MissingPue { key: String },

    #[error("coverage threshold {value} is outside (0, 1]")]
    InvalidCoverageThreshold { value: f64 },

    #[error("energy {value} Wh for ({model}, {task}) must be finite and > 0")]
    InvalidEnergyWh {
        model: String,
        task: String,
        value: f64,
    },

    #[error("embedded PUE {value} for ({model}, {task}) must be finite and >= 1.0")]
    InvalidEmbeddedPue {
        model: String,
        task: String,
        value: f64,
    },

    #[error("no energy entry for model {model:?}, task {task:?}; available tasks: {available_tasks:?}, available models: {available_models:?}")]
    UnknownEnergyEntry {
        model: String,
        task: String,
        available_tasks: Vec<String>,
        available_models: Vec<String>,
    },

    #[error("no water profile for key {key:?}")]
    MissingProfile { key: String },

    #[error("server energy {value} kWh must be finite and > 0")]
    NonPositiveEnergy { value: f64 },

    #[error("WUE {value} L/kWh must be finite and >= 0")]
    NegativeGamma { value: f64 },

    #[error("carbon intensity {value} kg/kWh must be finite and >= 0")]
    NegativeCarbonIntensity { value: f64 },
}

use alloc::string::String;
use chrono::{DateTime, Utc};

use crate::error::CoreError;
use crate::temp::WetBulbTemp;

/// One hourly wet-bulb observation for one country capital.
///
/// Humidity and precipitation are carried through for completeness but are
/// not inputs to the WUE curves.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyWeatherRecord {
    /// UTC instant at hour resolution.
    pub timestamp: DateTime<Utc>,
    /// ISO 3166-1 alpha-2 country code, uppercase.
    pub country: String,
    pub wet_bulb: WetBulbTemp,
    /// Relative humidity in percent, 0..=100.
    pub humidity: Option<f64>,
    /// Precipitation in millimetres, >= 0.
    pub precipitation: Option<f64>,
}

/// Uppercases and validates an ISO 3166-1 alpha-2 country code.
pub fn normalize_country_code(code: &str) -> Result<String, CoreError> {
    let trimmed = code.trim();
    if trimmed.len() == 2 && trimmed.bytes().all(|b| b.is_ascii_alphabetic()) {
        Ok(trimmed.to_ascii_uppercase())
    } else {
        Err(CoreError::InvalidCountryCode {
            code: trimmed.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn country_codes() {
        assert_eq!(normalize_country_code("eg").unwrap(), "EG");
        assert_eq!(normalize_country_code(" ZA ").unwrap(), "ZA");
        assert!(normalize_country_code("EGY").is_err());
        assert!(normalize_country_code("E1").is_err());
        assert!(normalize_country_code("").is_err());
    }
}

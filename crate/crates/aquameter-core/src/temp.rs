use crate::error::CoreError;

/// Lower edge of the accepted wet-bulb band, degrees Fahrenheit.
pub const MIN_PLAUSIBLE_F: f64 = -80.0;
/// Upper edge of the accepted wet-bulb band, degrees Fahrenheit.
pub const MAX_PLAUSIBLE_F: f64 = 150.0;

/// Converts Celsius to Fahrenheit.
pub fn celsius_to_fahrenheit(celsius: f64) -> Result<f64, CoreError> {
    if !celsius.is_finite() {
        return Err(CoreError::NonFiniteTemperature);
    }
    Ok(celsius * 9.0 / 5.0 + 32.0)
}

/// Converts Fahrenheit to Celsius.
pub fn fahrenheit_to_celsius(fahrenheit: f64) -> Result<f64, CoreError> {
    if !fahrenheit.is_finite() {
        return Err(CoreError::NonFiniteTemperature);
    }
    Ok((fahrenheit - 32.0) * 5.0 / 9.0)
}

/// A validated wet-bulb temperature, stored in Fahrenheit.
///
/// The onsite WUE curves are fitted in Fahrenheit, so ingestion converts once
/// at the boundary and everything downstream stays in that unit. Construction
/// rejects non-finite values and anything outside [-80, 150] degF, which
/// admits every terrestrial wet-bulb reading while catching sensor garbage.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WetBulbTemp {
    fahrenheit: f64,
}

impl WetBulbTemp {
    pub fn from_fahrenheit(fahrenheit: f64) -> Result<Self, CoreError> {
        if !fahrenheit.is_finite() {
            return Err(CoreError::NonFiniteTemperature);
        }
        if !(MIN_PLAUSIBLE_F..=MAX_PLAUSIBLE_F).contains(&fahrenheit) {
            return Err(CoreError::ImplausibleTemperature { fahrenheit });
        }
        Ok(Self { fahrenheit })
    }

    pub fn from_celsius(celsius: f64) -> Result<Self, CoreError> {
        Self::from_fahrenheit(celsius_to_fahrenheit(celsius)?)
    }

    pub fn fahrenheit(self) -> f64 {
        self.fahrenheit
    }

    pub fn celsius(self) -> f64 {
        (self.fahrenheit - 32.0) * 5.0 / 9.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        assert_eq!(celsius_to_fahrenheit(0.0).unwrap(), 32.0);
        assert_eq!(celsius_to_fahrenheit(100.0).unwrap(), 212.0);
        assert_eq!(celsius_to_fahrenheit(25.0).unwrap(), 77.0);
        assert_eq!(celsius_to_fahrenheit(24.0).unwrap(), 75.2);
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            celsius_to_fahrenheit(f64::NAN),
            Err(CoreError::NonFiniteTemperature)
        );
        assert_eq!(
            celsius_to_fahrenheit(f64::INFINITY),
            Err(CoreError::NonFiniteTemperature)
        );
        assert!(WetBulbTemp::from_fahrenheit(f64::NAN).is_err());
    }

    #[test]
    fn plausibility_band() {
        assert!(WetBulbTemp::from_fahrenheit(-80.0).is_ok());
        assert!(WetBulbTemp::from_fahrenheit(150.0).is_ok());
        assert_eq!(
            WetBulbTemp::from_fahrenheit(-80.1),
            Err(CoreError::ImplausibleTemperature { fahrenheit: -80.1 })
        );
        assert_eq!(
            WetBulbTemp::from_fahrenheit(150.1),
            Err(CoreError::ImplausibleTemperature { fahrenheit: 150.1 })
        );
        // Band check happens after conversion to Fahrenheit.
        assert!(WetBulbTemp::from_celsius(70.0).err().is_some()); // 158 degF
    }

    #[test]
    fn roundtrip() {
        for f in [-80.0, -13.27, 0.0, 48.73, 77.0, 150.0] {
            let back = celsius_to_fahrenheit(fahrenheit_to_celsius(f).unwrap()).unwrap();
            assert!((back - f).abs() < 1e-9, "{f} -> {back}");
        }
    }
}

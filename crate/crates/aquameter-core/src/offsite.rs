//! Offsite WUE: generation-weighted mean of per-fuel water intensities.

use alloc::string::String;

use crate::error::CoreError;

/// One fuel's share of electricity generation and its water intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct FuelContribution {
    pub fuel: String,
    /// Generation in any consistent unit (absolute kWh-equivalents or
    /// fractional shares); the weighted mean is scale-invariant.
    pub energy: f64,
    /// Water consumption factor in L/kWh.
    pub intensity: f64,
}

/// An offsite water usage efficiency figure in L/kWh.
///
/// Always a convex combination of the contributing intensities, so the value
/// lies in [min w_k, max w_k].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsiteWue {
    pub liters_per_kwh: f64,
}

/// Weighted mean intensity sum(e_k * w_k) / sum(e_k) over the mix.
///
/// An empty mix or one with zero total generation is an error rather than a
/// zero: a 0 L/kWh offsite WUE would silently understate footprints.
pub fn offsite_wue(mix: &[FuelContribution]) -> Result<OffsiteWue, CoreError> {
    if mix.is_empty() {
        return Err(CoreError::EmptyFuelMix);
    }
    let mut weighted = 0.0;
    let mut total = 0.0;
    for c in mix {
        if !c.energy.is_finite() || c.energy < 0.0 {
            return Err(CoreError::NegativeGeneration {
                fuel: c.fuel.clone(),
            });
        }
        if !c.intensity.is_finite() || c.intensity < 0.0 {
            return Err(CoreError::NegativeIntensity {
                fuel: c.fuel.clone(),
            });
        }
        weighted += c.energy * c.intensity;
        total += c.energy;
    }
    if total <= 0.0 {
        return Err(CoreError::ZeroTotalGeneration);
    }
    Ok(OffsiteWue {
        liters_per_kwh: weighted / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fc(fuel: &str, energy: f64, intensity: f64) -> FuelContribution {
        FuelContribution {
            fuel: fuel.into(),
            energy,
            intensity,
        }
    }

    #[test]
    fn equal_weight_mean() {
        let mix = vec![fc("hydro", 10.0, 17.0), fc("solar", 10.0, 1.0)];
        assert_eq!(offsite_wue(&mix).unwrap().liters_per_kwh, 9.0);
    }

    #[test]
    fn single_fuel_returns_its_intensity() {
        let mix = vec![fc("hydro", 42.0, 17.0)];
        assert_eq!(offsite_wue(&mix).unwrap().liters_per_kwh, 17.0);
    }

    #[test]
    fn weighted_mean() {
        // (1*2 + 3*6) / 4 = 5
        let mix = vec![fc("a", 1.0, 2.0), fc("b", 3.0, 6.0)];
        assert_eq!(offsite_wue(&mix).unwrap().liters_per_kwh, 5.0);
    }

    #[test]
    fn degenerate_mixes_are_errors() {
        assert_eq!(offsite_wue(&[]), Err(CoreError::EmptyFuelMix));
        let zeros = vec![fc("hydro", 0.0, 17.0), fc("solar", 0.0, 1.0)];
        assert_eq!(offsite_wue(&zeros), Err(CoreError::ZeroTotalGeneration));
    }

    #[test]
    fn invalid_entries_are_errors() {
        let neg = vec![fc("hydro", -1.0, 17.0)];
        assert!(matches!(
            offsite_wue(&neg),
            Err(CoreError::NegativeGeneration { .. })
        ));
        let nan = vec![fc("hydro", 1.0, f64::NAN)];
        assert!(matches!(
            offsite_wue(&nan),
            Err(CoreError::NegativeIntensity { .. })
        ));
    }
}

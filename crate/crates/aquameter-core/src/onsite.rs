//! Onsite WUE: empirical cooling-tower curves in wet-bulb temperature.
//!
//! Both curves are quadratics in the wet-bulb temperature (degrees
//! Fahrenheit), clamped at zero. They come from fits to a commercial cooling
//! tower under two control strategies, so behaviour outside the observed
//! temperature range is extrapolation; the clamp only guarantees
//! non-negativity, it does not correct the extrapolation.

use core::fmt;
use core::str::FromStr;

use crate::temp::WetBulbTemp;

/// Cooling-tower control strategy selecting which onsite WUE curve applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnsiteConfig {
    /// Fixed differential between wet-bulb and cold-water temperatures.
    FixedApproach,
    /// Constant cold-water temperature. The default: real systems usually
    /// hold the cold-water setpoint rather than the approach.
    #[default]
    FixedColdWater,
}

struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
}

// Coefficients stored exactly as fitted; do not refactor into derived forms.
const FIXED_APPROACH: Quadratic = Quadratic {
    a: -0.0001896,
    b: 0.03095,
    c: 0.4442,
};

const FIXED_COLD_WATER: Quadratic = Quadratic {
    a: 0.0005112,
    b: -0.04982,
    c: 2.387,
};

impl Quadratic {
    /// Clamped evaluation: max(0, a*t^2 + b*t + c).
    fn eval(&self, t: f64) -> f64 {
        let raw = (self.a * t + self.b) * t + self.c;
        if raw > 0.0 {
            raw
        } else {
            0.0
        }
    }
}

impl OnsiteConfig {
    /// Evaluates the clamped curve at a wet-bulb temperature in Fahrenheit.
    ///
    /// Total over all finite inputs; plausibility checks belong to
    /// [`WetBulbTemp`] construction, not here.
    pub fn evaluate_fahrenheit(self, t_f: f64) -> f64 {
        match self {
            OnsiteConfig::FixedApproach => FIXED_APPROACH.eval(t_f),
            OnsiteConfig::FixedColdWater => FIXED_COLD_WATER.eval(t_f),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OnsiteConfig::FixedApproach => "approach",
            OnsiteConfig::FixedColdWater => "coldwater",
        }
    }
}

impl fmt::Display for OnsiteConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OnsiteConfig {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "approach" => Ok(OnsiteConfig::FixedApproach),
            "coldwater" => Ok(OnsiteConfig::FixedColdWater),
            other => Err(alloc::format!(
                "unknown formula {other:?}; expected 'approach' or 'coldwater'"
            )),
        }
    }
}

/// An onsite water usage efficiency figure in L/kWh.
///
/// The clamp in the curves guarantees `liters_per_kwh >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsiteWue {
    pub liters_per_kwh: f64,
    pub config: OnsiteConfig,
}

/// Onsite WUE for a validated wet-bulb temperature under the given strategy.
pub fn onsite_wue(t: WetBulbTemp, config: OnsiteConfig) -> OnsiteWue {
    OnsiteWue {
        liters_per_kwh: config.evaluate_fahrenheit(t.fahrenheit()),
        config,
    }
}

/// Fixed-approach curve.
pub fn onsite_wue_fixed_approach(t: WetBulbTemp) -> OnsiteWue {
    onsite_wue(t, OnsiteConfig::FixedApproach)
}

/// Fixed cold-water-temperature curve (the default throughout).
pub fn onsite_wue_fixed_cold_water(t: WetBulbTemp) -> OnsiteWue {
    onsite_wue(t, OnsiteConfig::FixedColdWater)
}

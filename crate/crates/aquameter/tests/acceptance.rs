//! Acceptance suite: one test per criterion, each printing a PASS (or SKIP)
//! line. Run with:
//!
//! ```text
//! cargo test -p aquameter --test acceptance -- --nocapture
//! ```
//!
//! Criterion 6 needs externally published per-country WUE data; point
//! `AQUAMETER_ACCEPTANCE_FIXTURE` at a config file carrying `gammas`,
//! `offsite_us` and `offsite_global` to enable it (see the README). Without
//! it the suite runs criteria 1-5, 7 and 8, and criterion 6 reports SKIP.

mod common;

use aquameter::core::{
    builtin_energy_registry, builtin_pue_table, normalize_energy, offsite_wue, onsite_water,
    FuelContribution, OnsiteConfig, Uncertainty,
};
use aquameter::export::quantize6;
use aquameter::run::cmd_build;
use aquameter::RunConfig;
use common::Fixture;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// ── Tolerances ─────────────────────────────────────────────────────────

/// Spot-value agreement with the exact-arithmetic oracle.
const SPOT_ABS: f64 = 1e-5;
/// Slack on the analytic vertex bounds over the evaluation grid.
const BOUND_ABS: f64 = 1e-6;
/// Full-grid agreement between the f64 curves and the exact oracle;
/// generous for a three-term polynomial in f64.
const GRID_ABS: f64 = 1e-12;
/// Offsite WUE vs the naive summation oracle, relative.
const OFFSITE_REL: f64 = 1e-10;
/// Offsite WUE under generation rescaling, relative.
const SCALE_REL: f64 = 1e-12;
/// Reproduction of printed constants that are exact decimal products.
const CONSTANT_ABS: f64 = 1e-6;

// ── Exact oracle ───────────────────────────────────────────────────────
//
// The curve coefficients have at most seven decimal places, so at grid
// temperatures T = n/100 degF every term is an integer over 1e11. i128
// arithmetic keeps the evaluation exact; the only rounding is the final
// conversion to f64 (one ulp).

fn oracle(scaled_a: i128, scaled_b: i128, scaled_c: i128, n: i128) -> f64 {
    let raw = scaled_a * n * n + scaled_b * 10_000 * n + scaled_c;
    let value = raw as f64 * 1e-11;
    if value > 0.0 {
        value
    } else {
        0.0
    }
}

/// Fixed-approach curve at T = n/100 degF, exact.
fn oracle_approach(n: i128) -> f64 {
    oracle(-1896, 3095, 4442 * 10_000_000, n)
}

/// Fixed cold-water curve at T = n/100 degF, exact.
fn oracle_cold_water(n: i128) -> f64 {
    oracle(5112, -4982, 2387 * 100_000_000, n)
}

/// Vertex extrema as exact rationals of the printed coefficients.
const APPROACH_MAX: f64 = 64_739_189.0 / 37_920_000.0; // 1.7072570939, 1.70726 at 5 dp
const COLD_WATER_MIN: f64 = 5_997_263.0 / 5_112_000.0; // 1.1731735133, 1.17317 at 5 dp

fn eval(config: OnsiteConfig, n: i128) -> f64 {
    config.evaluate_fahrenheit(n as f64 / 100.0)
}

#[test]
fn criterion_1_formula_fidelity() {
    // Spot values, frozen from the oracle. The cold-water value at 77 degF
    // is 1.5817648 exactly (1.58176 at 6 dp).
    let cases: [(OnsiteConfig, i128, f64); 4] = [
        (OnsiteConfig::FixedColdWater, 6000, 1.23812),
        (OnsiteConfig::FixedColdWater, 7700, 1.5817648),
        (OnsiteConfig::FixedApproach, 7700, 1.7032116),
        (OnsiteConfig::FixedApproach, -2000, 0.0),
    ];
    for (config, n, frozen) in cases {
        let implemented = eval(config, n);
        let oracle_value = match config {
            OnsiteConfig::FixedApproach => oracle_approach(n),
            OnsiteConfig::FixedColdWater => oracle_cold_water(n),
        };
        assert!(
            (oracle_value - frozen).abs() < SPOT_ABS,
            "frozen value {frozen} disagrees with oracle {oracle_value}"
        );
        assert!(
            (implemented - oracle_value).abs() < SPOT_ABS,
            "{config:?} at {}: {implemented} vs oracle {oracle_value}",
            n as f64 / 100.0
        );
    }
    // Full-grid agreement with the exact oracle across the plausible band.
    for n in -8000..=15000i128 {
        let a = (eval(OnsiteConfig::FixedApproach, n) - oracle_approach(n)).abs();
        let c = (eval(OnsiteConfig::FixedColdWater, n) - oracle_cold_water(n)).abs();
        assert!(a <= GRID_ABS && c <= GRID_ABS, "grid mismatch at n={n}");
    }
    println!("ACCEPTANCE criterion 1 (formula fidelity): PASS");
}

#[test]
fn criterion_2_analytic_bounds() {
    // 0.01 degF grid over [-80, 150].
    for n in -8000..=15000i128 {
        let approach = eval(OnsiteConfig::FixedApproach, n);
        let cold_water = eval(OnsiteConfig::FixedColdWater, n);
        assert!(
            approach <= APPROACH_MAX + BOUND_ABS,
            "approach {approach} above vertex max at n={n}"
        );
        assert!(
            cold_water >= COLD_WATER_MIN - BOUND_ABS,
            "cold-water {cold_water} below vertex min at n={n}"
        );
    }
    // The approach curve is exactly zero at grid points beyond its real
    // roots (-13.2730 and 176.5114); the clamp returns literal 0.0.
    for n in (-20000..=-1328i128).chain(17652..=25000) {
        assert_eq!(eval(OnsiteConfig::FixedApproach, n), 0.0, "n={n}");
    }
    println!("ACCEPTANCE criterion 2 (analytic bounds): PASS");
}

#[test]
fn criterion_3_offsite_oracle_equivalence() {
    // Naive reference, coded separately from the kernel's single pass.
    fn naive(mix: &[(f64, f64)]) -> f64 {
        let mut numerator = 0.0;
        for &(e, w) in mix {
            numerator += e * w;
        }
        let mut denominator = 0.0;
        for &(e, _) in mix {
            denominator += e;
        }
        numerator / denominator
    }

    let mut rng = StdRng::seed_from_u64(0xA07A);
    let mut checked = 0;
    while checked < 1000 {
        let fuels = rng.random_range(1..=20usize);
        let mix: Vec<(f64, f64)> = (0..fuels)
            .map(|_| {
                (
                    rng.random_range(0.0..=100.0f64),
                    rng.random_range(0.0..=20.0f64),
                )
            })
            .collect();
        if mix.iter().map(|&(e, _)| e).sum::<f64>() <= 0.0 {
            continue;
        }
        let contributions: Vec<FuelContribution> = mix
            .iter()
            .enumerate()
            .map(|(i, &(energy, intensity))| FuelContribution {
                fuel: format!("f{i}"),
                energy,
                intensity,
            })
            .collect();
        let kernel = offsite_wue(&contributions).unwrap().liters_per_kwh;
        let reference = naive(&mix);
        assert!(
            (kernel - reference).abs() <= OFFSITE_REL * reference.abs().max(1e-12),
            "mix {mix:?}: {kernel} vs {reference}"
        );

        // Scale invariance under lambda in (0, 100].
        let lambda = rng.random_range(f64::MIN_POSITIVE..=100.0f64).max(1e-9);
        let scaled: Vec<FuelContribution> = contributions
            .iter()
            .map(|c| FuelContribution {
                fuel: c.fuel.clone(),
                energy: c.energy * lambda,
                intensity: c.intensity,
            })
            .collect();
        let rescaled = offsite_wue(&scaled).unwrap().liters_per_kwh;
        assert!(
            (rescaled - kernel).abs() <= SCALE_REL * kernel.abs().max(1e-12),
            "lambda {lambda}: {rescaled} vs {kernel}"
        );
        checked += 1;
    }
    println!("ACCEPTANCE criterion 3 (offsite oracle equivalence): PASS");
}

#[test]
fn criterion_4_reference_constants() {
    let pue = builtin_pue_table();
    let expected = [
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
    ];
    assert_eq!(pue.len(), expected.len());
    for (region, value) in expected {
        assert_eq!(pue.get(region), Some(value), "{region}");
    }

    let registry = builtin_energy_registry();
    let energies = [
        ("llama-3-70b", "report-10p", 52.25),
        ("gpt-4", "report-10p", 4660.0),
        ("llama-3-70b", "email", 10.0),
        ("gpt-4", "email", 232.0),
    ];
    assert_eq!(registry.len(), energies.len());
    for (model, task, wh) in energies {
        assert_eq!(registry.get(model, task).unwrap().energy_wh, wh);
    }

    // 3.144 Wh at embedded PUE 1.2 normalizes to 2.62 Wh of server energy.
    let estimate = aquameter::core::EnergyEstimate {
        model: "llama-3-70b".into(),
        task: "email".into(),
        output_tokens: 250,
        energy_wh: 3.144,
        embedded_pue: 1.2,
        uncertainty: Uncertainty::Standard,
    };
    let server_wh = normalize_energy(&estimate).unwrap() * 1000.0;
    assert!((server_wh - 2.62).abs() < CONSTANT_ABS, "{server_wh}");

    println!("ACCEPTANCE criterion 4 (reference constants): PASS");
}

#[test]
fn criterion_5_composite_products() {
    let registry = builtin_energy_registry();
    // US onsite-only water for (gpt-4, report-10p): 4.66 kWh x 0.55 L/kWh.
    let report = registry.get("gpt-4", "report-10p").unwrap();
    let water = onsite_water(
        normalize_energy(report).unwrap(),
        aquameter::core::US_ONSITE_WUE,
    )
    .unwrap();
    assert!((water - 2.563).abs() < CONSTANT_ABS, "{water}");

    // Global onsite-only water for (gpt-4, email): 0.232 kWh x 1.07 L/kWh.
    let email = registry.get("gpt-4", "email").unwrap();
    let water = onsite_water(
        normalize_energy(email).unwrap(),
        aquameter::core::GLOBAL_ONSITE_WUE,
    )
    .unwrap();
    assert!((water - 0.24824).abs() < CONSTANT_ABS, "{water}");

    println!("ACCEPTANCE criterion 5 (composite products): PASS");
}

/// The eleven profiled countries.
const PROFILED: [&str; 11] = [
    "DZ", "EG", "ET", "GA", "LY", "MA", "NA", "CG", "ZA", "TN", "RW",
];

#[test]
fn criterion_6_headline_reproduction() {
    // Needs the externally published per-country WUE figures; without them
    // this criterion is not reproducible and the binding suite is 1-5, 7, 8.
    let Some(fixture_path) = std::env::var_os("AQUAMETER_ACCEPTANCE_FIXTURE") else {
        println!(
            "ACCEPTANCE criterion 6 (headline reproduction): SKIP \
             (external dataset fixture not provided; criteria 1-5, 7, 8 are binding)"
        );
        return;
    };
    let config = RunConfig::from_file(std::path::Path::new(&fixture_path)).expect("fixture config");
    assert!(
        config.gammas.is_some(),
        "fixture config must set `gammas` (key,gamma_on,gamma_off CSV)"
    );
    assert!(
        config.offsite_global.is_some(),
        "fixture config must set `offsite_global`"
    );
    let mut keys: Vec<String> = PROFILED.iter().map(|s| s.to_string()).collect();
    keys.push(aquameter::core::GLOBAL_KEY.to_string());
    let table =
        aquameter::run::run_comparison(&config, &keys, "llama-3-70b", "report-10p", None)
            .expect("fixture comparison");

    let mut below_global = 0;
    for row in &table.rows {
        if row.result.key == aquameter::core::GLOBAL_KEY {
            continue;
        }
        let total = row.result.total_l;
        assert!(
            (0.35..=1.05).contains(&total),
            "{}: total {total} L outside the 0.7 L +/- 50% regime",
            row.result.key
        );
        if row.vs_global == Some(aquameter::core::BaselineFlag::Below) {
            below_global += 1;
        }
    }
    assert_eq!(below_global, 8, "below-global-average count");
    println!("ACCEPTANCE criterion 6 (headline reproduction): PASS");
}

#[test]
fn criterion_7_pipeline_properties() {
    let started = std::time::Instant::now();
    let mut rng = StdRng::seed_from_u64(0x71BE);

    // Determinism: same randomized fixture, two builds, identical bytes.
    let weather = common::random_weather_csv(&mut rng, &["EG", "CG"], 240);
    let fixture = Fixture::new();
    let base = RunConfig {
        weather: Some(fixture.write("weather.csv", &weather)),
        fuel_mix: Some(fixture.write("mix.csv", common::two_country_mix_csv())),
        intensity: Some(fixture.write("intensity.csv", common::intensity_csv())),
        out_dir: Some(fixture.path("run1")),
        ..Default::default()
    };
    cmd_build(&base).unwrap();
    cmd_build(&RunConfig {
        out_dir: Some(fixture.path("run2")),
        ..base.clone()
    })
    .unwrap();
    common::assert_trees_identical(&fixture.path("run1"), &fixture.path("run2"));

    // Export / re-ingest roundtrip at export granularity.
    let (records, _) =
        aquameter::ingest::weather::parse_weather(weather.as_bytes(), "weather.csv").unwrap();
    let series =
        aquameter::core::build_onsite_series(&records, OnsiteConfig::FixedColdWater);
    for country in ["EG", "CG"] {
        let reimported = aquameter::export::reimport_series(
            &fixture.path(&format!("run1/onsite/{country}.csv")),
            country,
            OnsiteConfig::FixedColdWater,
        )
        .unwrap();
        let original = &series[country];
        assert_eq!(original.points.len(), reimported.points.len());
        for (&(ts, v), &(rts, rv)) in original.points.iter().zip(&reimported.points) {
            assert_eq!(ts, rts);
            assert_eq!(quantize6(v), rv);
        }
    }

    // Monthly-mean linearity under randomized scaling.
    for _ in 0..50 {
        let lambda: f64 = rng.random_range(0.0..=20.0);
        let scaled_points: Vec<_> = series["EG"]
            .points
            .iter()
            .map(|&(ts, v)| (ts, v * lambda))
            .collect();
        let scaled_series = aquameter::core::WueSeries {
            country: "EG".into(),
            config: OnsiteConfig::FixedColdWater,
            points: scaled_points,
        };
        let base_months = aquameter::core::monthly_means(&series["EG"], 0.01).unwrap();
        let scaled_months = aquameter::core::monthly_means(&scaled_series, 0.01).unwrap();
        for (b, s) in base_months.iter().zip(&scaled_months) {
            let expected = b.mean_onsite.unwrap() * lambda;
            let got = s.mean_onsite.unwrap();
            assert!((got - expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }

    // Ranking invariance of compare under uniform gamma scaling.
    let registry = builtin_energy_registry();
    for _ in 0..50 {
        let keys: Vec<String> = (0..6).map(|i| format!("A{}", (b'A' + i) as char)).collect();
        let lambda: f64 = rng.random_range(0.01..=100.0);
        let mut base_profiles = aquameter::core::ProfileTable::new();
        let mut scaled_profiles = aquameter::core::ProfileTable::new();
        for key in &keys {
            let gamma_on: f64 = rng.random_range(0.01..=5.0);
            let gamma_off: f64 = rng.random_range(0.01..=20.0);
            let pue: f64 = rng.random_range(1.0..=3.0);
            base_profiles.insert(
                key,
                aquameter::core::WaterProfile {
                    gamma_on,
                    gamma_off,
                    pue,
                    carbon_intensity: None,
                },
            );
            scaled_profiles.insert(
                key,
                aquameter::core::WaterProfile {
                    gamma_on: gamma_on * lambda,
                    gamma_off: gamma_off * lambda,
                    pue,
                    carbon_intensity: None,
                },
            );
        }
        let order = |profiles| {
            aquameter::core::compare(&keys, "llama-3-70b", "email", profiles, &registry)
                .unwrap()
                .rows
                .iter()
                .map(|r| r.result.key.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(order(&base_profiles), order(&scaled_profiles));
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed < std::time::Duration::from_secs(10),
        "pipeline properties took {elapsed:?}"
    );
    println!("ACCEPTANCE criterion 7 (pipeline properties): PASS");
}

#[test]
fn criterion_8_throughput() {
    use aquameter::core::chrono::{Duration, TimeZone, Utc};
    use aquameter::core::{HourlyWeatherRecord, WetBulbTemp};

    let mut rng = StdRng::seed_from_u64(0x788);
    let start = Utc.with_ymd_and_hms(2023, 8, 23, 0, 0, 0).unwrap();
    let mut records = Vec::with_capacity(41 * 8784);
    for i in 0..41u8 {
        let country = format!("{}{}", char::from(b'A' + i / 26), char::from(b'A' + i % 26));
        for h in 0..8784i64 {
            records.push(HourlyWeatherRecord {
                timestamp: start + Duration::hours(h),
                country: country.clone(),
                wet_bulb: WetBulbTemp::from_fahrenheit(rng.random_range(30.0..95.0)).unwrap(),
                humidity: None,
                precipitation: None,
            });
        }
    }
    let mut mix = aquameter::core::FuelMixTable::new();
    let mut intensities = aquameter::core::WaterIntensityTable::new();
    intensities.insert("hydro", 17.0).unwrap();
    intensities.insert("solar", 1.0).unwrap();
    for record in records.iter().step_by(8784) {
        mix.insert(&record.country, 2023, "hydro", 0.7).unwrap();
        mix.insert(&record.country, 2023, "solar", 0.3).unwrap();
    }

    let started = std::time::Instant::now();
    let output = aquameter::run::build_dataset(
        &records,
        &mix,
        &intensities,
        OnsiteConfig::FixedColdWater,
        0.9,
        Some(2023),
        Vec::new(),
    )
    .unwrap();
    let elapsed = started.elapsed();

    assert_eq!(output.series.len(), 41);
    let points: usize = output.series.values().map(|s| s.points.len()).sum();
    assert_eq!(points, 41 * 8784);
    assert_eq!(output.monthly.len(), 41);
    assert_eq!(output.offsite.len(), 41);
    assert!(
        elapsed < std::time::Duration::from_secs(5),
        "41-country build took {elapsed:?}"
    );
    println!(
        "ACCEPTANCE criterion 8 (throughput): PASS ({points} points in {elapsed:?})"
    );
}

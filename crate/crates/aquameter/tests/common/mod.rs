//! Shared fixture builders for the integration tests.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Hourly weather CSV in Celsius starting 2023-08-23T00:00:00Z.
pub fn weather_csv(countries: &[(&str, f64)], hours: usize) -> String {
    let mut out = String::from("timestamp,country,wet_bulb_c,humidity,precip_mm\n");
    for &(country, base_c) in countries {
        for h in 0..hours {
            let ts = timestamp(h as i64);
            let temp = base_c + 2.0 * ((h % 24) as f64 / 24.0);
            writeln!(out, "{ts},{country},{temp},,").unwrap();
        }
    }
    out
}

/// Random-temperature weather CSV, seeded, wet-bulb uniform in [5, 35] degC.
pub fn random_weather_csv(rng: &mut StdRng, countries: &[&str], hours: usize) -> String {
    let mut out = String::from("timestamp,country,wet_bulb_c,humidity,precip_mm\n");
    for &country in countries {
        for h in 0..hours {
            let ts = timestamp(h as i64);
            let temp: f64 = rng.random_range(5.0..35.0);
            writeln!(out, "{ts},{country},{temp},,").unwrap();
        }
    }
    out
}

pub fn timestamp(hours_from_start: i64) -> String {
    use aquameter::core::chrono::{Duration, TimeZone, Utc};
    let start = Utc.with_ymd_and_hms(2023, 8, 23, 0, 0, 0).unwrap();
    (start + Duration::hours(hours_from_start))
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

pub fn two_country_mix_csv() -> &'static str {
    "country,year,fuel,share\nEG,2023,hydro,0.5\nEG,2023,solar,0.5\nCG,2023,hydro,1.0\n"
}

pub fn intensity_csv() -> &'static str {
    "fuel,l_per_kwh\nhydro,17.0\nsolar,1.0\n"
}

pub struct Fixture {
    pub dir: tempfile::TempDir,
}

impl Fixture {
    pub fn new() -> Self {
        Self {
            dir: tempfile::TempDir::new().expect("create temp dir"),
        }
    }

    pub fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("write fixture");
        path
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

/// Byte-for-byte comparison of two directory trees.
pub fn assert_trees_identical(a: &Path, b: &Path) {
    let list = |root: &Path| {
        let mut files = Vec::new();
        let mut stack = vec![root.to_path_buf()];
        while let Some(dir) = stack.pop() {
            for entry in std::fs::read_dir(&dir).expect("read dir") {
                let path = entry.expect("dir entry").path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    files.push(path.strip_prefix(root).unwrap().to_path_buf());
                }
            }
        }
        files.sort();
        files
    };
    let files_a = list(a);
    let files_b = list(b);
    assert_eq!(files_a, files_b, "directory layouts differ");
    for relative in &files_a {
        let bytes_a = std::fs::read(a.join(relative)).unwrap();
        let bytes_b = std::fs::read(b.join(relative)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{} differs between runs", relative.display());
    }
}

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

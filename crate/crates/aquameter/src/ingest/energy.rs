//! Energy-registry override CSV:
//! `model,task,output_tokens,energy_wh,embedded_pue`.
//!
//! Entries extend the built-in registry; a matching (model, task) pair
//! replaces the built-in figure.

use std::io::Read;
use std::path::Path;

use aquameter_core::{builtin_energy_registry, EnergyEstimate, EnergyRegistry, Uncertainty};

use crate::error::{Error, Issue};

use super::{check_columns, finish, parse_f64, read_table, HeaderIndex};

pub fn parse_energy_entries(reader: impl Read, source: &str) -> Result<Vec<EnergyEstimate>, Error> {
    let table = read_table(reader, source)?;
    check_columns(
        &table,
        &["model", "task", "output_tokens", "energy_wh", "embedded_pue"],
        &[],
        &[],
    )?;
    let index = HeaderIndex::new(&table.headers);

    let mut issues: Vec<Issue> = Vec::new();
    let mut entries = Vec::new();
    let mut seen: std::collections::BTreeMap<(String, String), u64> =
        std::collections::BTreeMap::new();

    for (line, fields) in &table.rows {
        let line = *line;
        let mut push = |message: String| issues.push(Issue { line, message });

        if let Err(message) = index.check_width(fields) {
            push(message);
            continue;
        }
        let model = index
            .get(fields, "model")
            .ok_or_else(|| "missing model".to_string())
            .map(|m| m.to_ascii_lowercase());
        let task = index
            .get(fields, "task")
            .ok_or_else(|| "missing task".to_string())
            .map(|t| t.to_ascii_lowercase());
        let output_tokens = index
            .get(fields, "output_tokens")
            .ok_or_else(|| "missing output_tokens".to_string())
            .and_then(|raw| {
                raw.parse::<u64>()
                    .map_err(|_| format!("unparseable output_tokens: {raw:?}"))
            });
        let energy_wh = index
            .get(fields, "energy_wh")
            .ok_or_else(|| "missing energy_wh".to_string())
            .and_then(|raw| parse_f64(raw, "energy_wh"));
        let embedded_pue = index
            .get(fields, "embedded_pue")
            .ok_or_else(|| "missing embedded_pue".to_string())
            .and_then(|raw| parse_f64(raw, "embedded_pue"));

        let (model, task, output_tokens, energy_wh, embedded_pue) =
            match (model, task, output_tokens, energy_wh, embedded_pue) {
                (Ok(m), Ok(t), Ok(o), Ok(e), Ok(p)) => (m, t, o, e, p),
                (m, t, o, e, p) => {
                    for message in [m.err(), t.err(), o.err(), e.err(), p.err()]
                        .into_iter()
                        .flatten()
                    {
                        push(message);
                    }
                    continue;
                }
            };

        let key = (model.clone(), task.clone());
        if let Some(&previous_line) = seen.get(&key) {
            push(format!(
                "duplicate entry ({model}, {task}) (also on line {previous_line})"
            ));
            continue;
        }
        seen.insert(key, line);
        let entry = EnergyEstimate {
            model,
            task,
            output_tokens,
            energy_wh,
            embedded_pue,
            uncertainty: Uncertainty::Standard,
        };
        if let Err(e) = entry.validate() {
            push(e.to_string());
            continue;
        }
        entries.push(entry);
    }

    finish(source, issues)?;
    Ok(entries)
}

/// The effective registry: built-ins plus the optional override file.
pub fn load_energy_registry(path: Option<&Path>) -> Result<EnergyRegistry, Error> {
    let mut registry = builtin_energy_registry();
    if let Some(path) = path {
        let source = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(&source, e))?;
        for entry in parse_energy_entries(std::io::BufReader::new(file), &source)? {
            registry.insert(entry)?;
        }
    }
    Ok(registry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn user_entries_extend_builtins() {
        let csv = "model,task,output_tokens,energy_wh,embedded_pue\n\
                   mistral-7b,email,250,1.5,1.2\n";
        let entries = parse_energy_entries(csv.as_bytes(), "energy.csv").unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].embedded_pue, 1.2);
        assert_eq!(entries[0].uncertainty, Uncertainty::Standard);
    }

    #[test]
    fn invalid_embedded_pue_rejected() {
        let csv = "model,task,output_tokens,energy_wh,embedded_pue\n\
                   mistral-7b,email,250,10.0,0.9\n";
        assert!(parse_energy_entries(csv.as_bytes(), "energy.csv").is_err());
    }

    #[test]
    fn builtin_defaults_without_file() {
        let registry = load_energy_registry(None).unwrap();
        assert_eq!(registry.len(), 4);
    }
}

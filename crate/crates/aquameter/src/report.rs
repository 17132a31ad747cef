//! Aligned stdout tables. Numeric cells use the same six-decimal formatting
//! as the CSV exports so the two always agree value-for-value.

use std::collections::BTreeSet;

use aquameter_core::{ComparisonTable, Uncertainty};

use crate::export::fmt6;

pub fn comparison_table(table: &ComparisonTable) -> String {
    let with_carbon = table.rows.iter().any(|r| r.result.carbon_kg.is_some());
    let mut header = vec![
        "rank".to_string(),
        "key".to_string(),
        "model".to_string(),
        "task".to_string(),
        "onsite_l".to_string(),
        "offsite_l".to_string(),
        "total_l".to_string(),
        "vs_us".to_string(),
        "vs_global".to_string(),
    ];
    if with_carbon {
        header.push("carbon_kg".to_string());
    }
    let mut rows: Vec<Vec<String>> = vec![header];
    for row in &table.rows {
        let r = &row.result;
        let mut cells = vec![
            row.rank.to_string(),
            r.key.clone(),
            r.model.clone(),
            r.task.clone(),
            fmt6(r.onsite_l),
            fmt6(r.offsite_l),
            fmt6(r.total_l),
            row.vs_us.map(|f| f.to_string()).unwrap_or_else(|| "-".into()),
            row.vs_global.map(|f| f.to_string()).unwrap_or_else(|| "-".into()),
        ];
        if with_carbon {
            cells.push(
                r.carbon_kg
                    .map(fmt6)
                    .unwrap_or_else(|| "-".into()),
            );
        }
        rows.push(cells);
    }

    let columns = rows[0].len();
    let mut widths = vec![0usize; columns];
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:>width$}", width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }

    let flagged: BTreeSet<&str> = table
        .rows
        .iter()
        .filter(|r| r.result.uncertainty == Uncertainty::High)
        .map(|r| r.result.model.as_str())
        .collect();
    if !flagged.is_empty() {
        let models: Vec<&str> = flagged.into_iter().collect();
        out.push_str(&format!(
            "note: energy figures for {} are extrapolated estimates (uncertainty: high)\n",
            models.join(", ")
        ));
    }
    out
}

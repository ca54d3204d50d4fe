use powerindex::ring::to_decimal;
use powerindex::BigRational;
use serde_json::{json, Map, Value};

use crate::compute::Report;
use crate::{Exactness, Format};

const SIGNIFICANT_DIGITS: usize = 12;

/// Column names and one row of cells per player.
fn cells(report: &Report, exact: Exactness) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["player".to_string(), "weight".to_string()];
    let mut columns: Vec<&[BigRational]> = Vec::new();
    for (name, values) in [("banzhaf", &report.banzhaf), ("shapley", &report.shapley)] {
        if let Some(v) = values {
            if exact != Exactness::Float {
                header.push(name.to_string());
            }
            if exact != Exactness::Rational {
                header.push(format!("{name}_decimal"));
            }
            columns.push(v);
        }
    }
    let rows = report
        .weights
        .iter()
        .enumerate()
        .map(|(p, w)| {
            let mut row = vec![p.to_string(), w.to_string()];
            for col in &columns {
                if exact != Exactness::Float {
                    row.push(col[p].to_string());
                }
                if exact != Exactness::Rational {
                    row.push(to_decimal(&col[p], SIGNIFICANT_DIGITS));
                }
            }
            row
        })
        .collect();
    (header, rows)
}

fn table(report: &Report, header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = format!(
        "quota {}, {} players, method {}\n",
        report.quota,
        report.weights.len(),
        report.method
    );
    if let Some(d) = report.degenerate {
        out += &format!("degenerate: {d}\n");
    }
    out += &line(header);
    for row in rows {
        out += &line(row);
    }
    out
}

fn csv(report: &Report, header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    if let Some(d) = report.degenerate {
        out += &format!("# degenerate: {d}\n");
    }
    out += &(header.join(",") + "\n");
    for row in rows {
        out += &(row.join(",") + "\n");
    }
    out
}

fn json(report: &Report, header: &[String], rows: &[Vec<String>]) -> String {
    let players: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in header.iter().zip(row) {
                let v = match name.as_str() {
                    "player" | "weight" => json!(cell.parse::<u64>().expect("integer column")),
                    _ => json!(cell),
                };
                obj.insert(name.clone(), v);
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "quota": report.quota,
        "method": report.method,
        "degenerate": report.degenerate,
        "players": players,
    });
    serde_json::to_string_pretty(&doc).expect("plain JSON values") + "\n"
}

pub fn render(report: &Report, format: Format, exact: Exactness) -> String {
    let (header, rows) = cells(report, exact);
    match format {
        Format::Table => table(report, &header, &rows),
        Format::Csv => csv(report, &header, &rows),
        Format::Json => json(report, &header, &rows),
    }
}

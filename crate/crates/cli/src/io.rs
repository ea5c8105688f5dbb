//! Field CSV and PGM heatmap formats.

use std::fmt::Write as _;
use std::path::Path;

use goursat_core::field_grid::{Field2D, Grid2D};

#[derive(Debug, thiserror::Error)]
pub enum FieldFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}, line {line}: {reason}")]
    Format {
        path: String,
        line: usize,
        reason: String,
    },
}

/// `x1,x2,value` with one row per node, `x1` major; 17 significant digits.
pub fn field_csv(field: &Field2D<f64>) -> String {
    let g = field.grid();
    let (n1, n2) = g.shape();
    let mut out = String::with_capacity(64 * n1 * n2 + 16);
    out.push_str("x1,x2,value\n");
    for k1 in 0..n1 {
        let x1 = g.g1.node(k1);
        for k2 in 0..n2 {
            let _ = writeln!(
                out,
                "{x1:.16e},{:.16e},{:.16e}",
                g.g2.node(k2),
                field.at(k1, k2)
            );
        }
    }
    out
}

/// Reads a field written by [`field_csv`]; node coordinates must match `grid`.
pub fn read_field_csv(path: &Path, grid: &Grid2D<f64>) -> Result<Field2D<f64>, FieldFileError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| FieldFileError::Io {
        path: name.clone(),
        source,
    })?;
    let bad = |line: usize, reason: String| FieldFileError::Format {
        path: name.clone(),
        line,
        reason,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "x1,x2,value" => {}
        _ => return Err(bad(1, "expected header `x1,x2,value`".into())),
    }
    let (n1, n2) = grid.shape();
    let tol = 1e-9 * (grid.g1.length() + grid.g2.length());
    let mut values = Vec::with_capacity(grid.len());
    for (idx, line) in lines {
        let k = values.len();
        if k >= grid.len() {
            return Err(bad(idx + 1, format!("more than {} data rows", grid.len())));
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(idx + 1, e.to_string()))?;
        if cols.len() != 3 {
            return Err(bad(
                idx + 1,
                format!("expected 3 columns, got {}", cols.len()),
            ));
        }
        let (k1, k2) = (k / n2, k % n2);
        if (cols[0] - grid.g1.node(k1)).abs() > tol || (cols[1] - grid.g2.node(k2)).abs() > tol {
            return Err(bad(
                idx + 1,
                format!(
                    "node ({}, {}) does not match grid node ({k1}, {k2})",
                    cols[0], cols[1]
                ),
            ));
        }
        values.push(cols[2]);
    }
    if values.len() != n1 * n2 {
        return Err(bad(
            text.lines().count(),
            format!("expected {} data rows, got {}", n1 * n2, values.len()),
        ));
    }
    Field2D::new(*grid, values).map_err(|e| bad(0, e.to_string()))
}

/// Grey level of `x` under the linear map `[min, max] -> [0, 255]`; a constant
/// field maps to 0.
pub fn grey_level(x: f64, min: f64, max: f64) -> u8 {
    if max > min {
        (((x - min) / (max - min)) * 255.0)
            .round()
            .clamp(0.0, 255.0) as u8
    } else {
        0
    }
}

/// Plain (P2) PGM with `x2` increasing upwards and `x1` to the right.
pub fn heatmap_pgm(field: &Field2D<f64>) -> String {
    let (n1, n2) = field.grid().shape();
    let vals = field.values();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = format!("P2\n{n1} {n2}\n255\n");
    for k2 in (0..n2).rev() {
        let row: Vec<String> = (0..n1)
            .map(|k1| grey_level(field.at(k1, k2), min, max).to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

//! CSV ingestion and emission.
//!
//! All interchange files are UTF-8 CSV with `.` as the decimal separator.
//! Numeric output is fixed at 10 significant digits, which distinguishes
//! exact rationals such as 15/36 from their neighbours while staying
//! platform-stable.

use std::collections::HashMap;
use std::path::Path;

use crate::analysis::{Classification, DdPoint, Decision, DepthReport};
use crate::counterexamples::DepthMap;
use crate::metrics::{histogram_to_cdf, Curve, DistanceMatrix, HistogramBin, StepCdf};
use crate::{Error, Result};

/// Significant digits used for every numeric CSV field.
pub const OUTPUT_DIGITS: usize = 10;

/// Render `x` positionally with the given number of significant digits.
/// Zero renders as `"0"`.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let scientific = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = scientific.split_once('e').expect("e-notation");
    let exponent: i32 = exponent.parse().expect("numeric exponent");
    let negative = mantissa.starts_with('-');
    let digit_chars: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digit_chars.len(), digits);

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exponent >= digits as i32 - 1 {
        out.push_str(&digit_chars);
        for _ in 0..(exponent - (digits as i32 - 1)) {
            out.push('0');
        }
    } else if exponent >= 0 {
        let point = (exponent + 1) as usize;
        out.push_str(&digit_chars[..point]);
        out.push('.');
        out.push_str(&digit_chars[point..]);
    } else {
        out.push_str("0.");
        for _ in 0..(-exponent - 1) {
            out.push('0');
        }
        out.push_str(&digit_chars);
    }
    out
}

fn fmt(x: f64) -> String {
    format_significant(x, OUTPUT_DIGITS)
}

/// Quote a CSV field if it contains separators or quotes.
fn escape_csv(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn parse_error(path: &Path, line: u64, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Read all CSV records as `(line, fields)`, skipping blank lines.
fn read_records(path: &Path) -> Result<Vec<(u64, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_error(path, 0, e.to_string()))?;
    let mut rows = Vec::new();
    for outcome in reader.records() {
        let record = outcome.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        rows.push((line, record.iter().map(|s| s.to_string()).collect()));
    }
    if rows.is_empty() {
        return Err(parse_error(path, 0, "file has no records"));
    }
    Ok(rows)
}

fn parse_cell(path: &Path, line: u64, column: usize, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        parse_error(
            path,
            line,
            format!("column {}: invalid number {:?}", column + 1, value),
        )
    })
}

/// Read curves from CSV. The header `label,t=<v1>,t=<v2>,...` defines the
/// shared grid; each row is one curve. Rows named `name#channel` group into
/// one multi-channel curve labelled `name`, channels in file order.
pub fn read_curves_csv(path: &Path) -> Result<Vec<(String, Curve)>> {
    let rows = read_records(path)?;
    let (header_line, header) = &rows[0];
    if header.len() < 2 || header[0] != "label" {
        return Err(parse_error(
            path,
            *header_line,
            "header must be `label,t=<v1>,t=<v2>,...`",
        ));
    }
    let mut grid = Vec::with_capacity(header.len() - 1);
    for (column, cell) in header.iter().enumerate().skip(1) {
        let value = cell.strip_prefix("t=").ok_or_else(|| {
            parse_error(
                path,
                *header_line,
                format!("column {}: grid cell {:?} must look like t=<value>", column + 1, cell),
            )
        })?;
        grid.push(parse_cell(path, *header_line, column, value)?);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parse_error(
            path,
            *header_line,
            "grid values must be strictly increasing",
        ));
    }

    // Group rows by base label, preserving first-appearance order.
    let mut order: Vec<String> = Vec::new();
    let mut grouped: HashMap<String, Vec<(Option<String>, Vec<f64>)>> = HashMap::new();
    let mut seen_full: HashMap<String, u64> = HashMap::new();
    for (line, fields) in &rows[1..] {
        if fields.len() != grid.len() + 1 {
            return Err(parse_error(
                path,
                *line,
                format!("expected {} fields, got {}", grid.len() + 1, fields.len()),
            ));
        }
        let full_label = fields[0].clone();
        if full_label.is_empty() {
            return Err(parse_error(path, *line, "empty label"));
        }
        if seen_full.insert(full_label.clone(), *line).is_some() {
            return Err(Error::DuplicateLabel { label: full_label });
        }
        let (base, channel) = match full_label.split_once('#') {
            Some((base, channel)) => (base.to_string(), Some(channel.to_string())),
            None => (full_label.clone(), None),
        };
        let mut values = Vec::with_capacity(grid.len());
        for (column, cell) in fields.iter().enumerate().skip(1) {
            values.push(parse_cell(path, *line, column, cell)?);
        }
        if !grouped.contains_key(&base) {
            order.push(base.clone());
        }
        grouped.entry(base).or_default().push((channel, values));
    }

    let mut curves = Vec::with_capacity(order.len());
    for base in order {
        let channels = grouped.remove(&base).expect("grouped above");
        let named = channels.iter().filter(|(c, _)| c.is_some()).count();
        if named != 0 && named != channels.len() {
            return Err(parse_error(
                path,
                0,
                format!("label {base:?} mixes plain and channelled rows"),
            ));
        }
        let curve = Curve::new(
            grid.clone(),
            channels.into_iter().map(|(_, values)| values).collect(),
        )
        .map_err(|e| match e {
            Error::InvalidCurve { reason } => Error::InvalidCurve {
                reason: format!("curve {base:?}: {reason}"),
            },
            other => other,
        })?;
        curves.push((base, curve));
    }
    Ok(curves)
}

/// Read a validated distance matrix from CSV: a header of column labels and
/// one row per label, with matching row labels in the first column.
pub fn read_matrix_csv(path: &Path) -> Result<DistanceMatrix> {
    let rows = read_records(path)?;
    let (header_line, header) = &rows[0];
    if header.len() < 2 {
        return Err(parse_error(
            path,
            *header_line,
            "header must list at least one label",
        ));
    }
    let labels: Vec<String> = header[1..].to_vec();
    let n = labels.len();
    let body = &rows[1..];
    if body.len() != n {
        return Err(Error::MatrixNotSquare {
            rows: body.len(),
            cols: n,
        });
    }
    let mut entries = Vec::with_capacity(n);
    for (i, (line, fields)) in body.iter().enumerate() {
        if fields.len() != n + 1 {
            return Err(parse_error(
                path,
                *line,
                format!("expected {} fields, got {}", n + 1, fields.len()),
            ));
        }
        if fields[0] != labels[i] {
            return Err(parse_error(
                path,
                *line,
                format!(
                    "row label {:?} does not match column label {:?}",
                    fields[0], labels[i]
                ),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for (column, cell) in fields.iter().enumerate().skip(1) {
            row.push(parse_cell(path, *line, column, cell)?);
        }
        entries.push(row);
    }
    DistanceMatrix::new(labels, entries)
}

/// Read per-label histograms from long-format CSV
/// (`label,bin_left,bin_right,count`) and convert each to its distribution
/// function. Labels may interleave; bins keep file order within a label.
pub fn read_histograms_csv(path: &Path) -> Result<Vec<(String, StepCdf)>> {
    let rows = read_records(path)?;
    let (header_line, header) = &rows[0];
    let expected = ["label", "bin_left", "bin_right", "count"];
    if header.len() != 4 || header.iter().zip(expected).any(|(a, b)| a != b) {
        return Err(parse_error(
            path,
            *header_line,
            "header must be `label,bin_left,bin_right,count`",
        ));
    }
    let mut order: Vec<String> = Vec::new();
    let mut grouped: HashMap<String, Vec<HistogramBin>> = HashMap::new();
    for (line, fields) in &rows[1..] {
        if fields.len() != 4 {
            return Err(parse_error(
                path,
                *line,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let label = fields[0].clone();
        if label.is_empty() {
            return Err(parse_error(path, *line, "empty label"));
        }
        let bin = HistogramBin {
            left: parse_cell(path, *line, 1, &fields[1])?,
            right: parse_cell(path, *line, 2, &fields[2])?,
            count: parse_cell(path, *line, 3, &fields[3])?,
        };
        if !grouped.contains_key(&label) {
            order.push(label.clone());
        }
        grouped.entry(label).or_default().push(bin);
    }
    let mut cdfs = Vec::with_capacity(order.len());
    for label in order {
        let bins = grouped.remove(&label).expect("grouped above");
        let cdf = histogram_to_cdf(&bins).map_err(|e| match e {
            Error::InvalidHistogram { reason } => Error::InvalidHistogram {
                reason: format!("label {label:?}: {reason}"),
            },
            other => other,
        })?;
        cdfs.push((label, cdf));
    }
    Ok(cdfs)
}

/// `label,depth,rank` rows in decreasing depth order.
pub fn depth_report_csv(report: &DepthReport) -> String {
    let mut out = String::from("label,depth,rank\n");
    for (rank, label, depth) in report.ranked() {
        out.push_str(&format!("{},{},{rank}\n", escape_csv(label), fmt(depth.value)));
    }
    out
}

/// `label,depth_a,depth_b` rows in query order.
pub fn dd_points_csv(points: &[DdPoint]) -> String {
    let mut out = String::from("label,depth_a,depth_b\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            escape_csv(&p.label),
            fmt(p.depth_a.value),
            fmt(p.depth_b.value)
        ));
    }
    out
}

/// `label,assigned,depth_<class>...,outcome` rows in query order.
pub fn classifications_csv(
    class_labels: &[String],
    rows: &[(String, Classification)],
) -> String {
    let mut out = String::from("label,assigned");
    for class in class_labels {
        out.push_str(&format!(",depth_{}", escape_csv(class)));
    }
    out.push_str(",outcome\n");
    for (label, outcome) in rows {
        let (assigned, kind) = match &outcome.decision {
            Decision::Assigned(class) => (class.clone(), "assigned"),
            Decision::Tie(classes) => (classes.join(";"), "tie"),
            Decision::AllOutlying => (String::new(), "all_outlying"),
        };
        out.push_str(&format!("{},{}", escape_csv(label), escape_csv(&assigned)));
        for depth in &outcome.depths {
            out.push_str(&format!(",{}", fmt(depth.value)));
        }
        out.push_str(&format!(",{kind}\n"));
    }
    out
}

/// `x1,x2,depth` rows, x1-major, matching the map's storage order.
pub fn depth_map_csv(map: &DepthMap) -> String {
    let mut out = String::from("x1,x2,depth\n");
    for (i1, &x1) in map.x1_axis().iter().enumerate() {
        for (i2, &x2) in map.x2_axis().iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt(x1),
                fmt(x2),
                fmt(map.value_at(i1, i2))
            ));
        }
    }
    out
}

/// `<coordinate-name>,depth` rows along a section.
pub fn section_csv(coordinate_name: &str, section: &[(f64, f64)]) -> String {
    let mut out = format!("{coordinate_name},depth\n");
    for (coordinate, depth) in section {
        out.push_str(&format!("{},{}\n", fmt(*coordinate), fmt(*depth)));
    }
    out
}

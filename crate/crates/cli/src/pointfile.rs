//! Plain-text point files: one point per line, coordinates as whitespace-
//! separated integers, `#` starts a comment line.

use std::collections::HashMap;
use std::fmt::Write as _;

use dilates::{Point, PointSet};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoints {
    pub set: PointSet,
    /// Human-readable notes about dropped duplicate lines.
    pub warnings: Vec<String>,
}

pub fn parse_points(text: &str) -> Result<ParsedPoints, CliError> {
    let mut dim = None;
    let mut first_seen: HashMap<Point, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut warnings = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| CliError::parse(Some(line_no), format!("invalid integer {tok:?}")))
            })
            .collect::<Result<Vec<i64>, _>>()?;
        let d = *dim.get_or_insert(coords.len());
        if coords.len() != d {
            return Err(CliError::parse(
                Some(line_no),
                format!("expected {d} coordinates, found {}", coords.len()),
            ));
        }
        let p = Point::new(coords);
        if let Some(&prev) = first_seen.get(&p) {
            warnings.push(format!("line {line_no}: duplicate point {p} (first on line {prev}) ignored"));
            continue;
        }
        first_seen.insert(p.clone(), line_no);
        points.push(p);
    }

    let dim = dim.ok_or_else(|| CliError::parse(None, "no points in input".into()))?;
    let set = PointSet::new(dim, points)?;
    Ok(ParsedPoints { set, warnings })
}

pub fn format_points(set: &PointSet) -> String {
    let mut out = format!("# d={} n={}\n", set.dim(), set.len());
    for p in set {
        let line = p.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        writeln!(out, "{line}").expect("writing to a String");
    }
    out
}
